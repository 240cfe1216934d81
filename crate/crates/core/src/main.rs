use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};

use metacsp::cli::{self, MatrixSource};

#[derive(Parser)]
#[command(name = "metacsp", version, about = "Free metabelian groups, IA-automorphisms and certified congruence decompositions")]
struct Args {
    /// Number of generators / variables.
    #[arg(short = 'n', global = true, default_value_t = 4)]
    n: usize,
    /// Modulus m (suites and decompositions default to 2).
    #[arg(short = 'm', global = true)]
    m: Option<u64>,
    /// Emit one JSON object per line instead of text.
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Magnus pair and identity verdict of a word; with -m also its image mod m.
    Word { text: String },
    /// IA matrix of the automorphism x_i -> image_i.
    Aut {
        #[arg(required = true)]
        images: Vec<String>,
    },
    /// Membership of a polynomial in a structured ideal such as "H(2)" or "A*O(3)".
    Ideal { poly: String, ideal: String },
    /// Run a verification suite: type1, type2, congruences, magnus, decompose-roundtrip.
    Verify { suite: String },
    /// Decompose a member of IG_{n,m^2} and write a certificate.
    #[command(group(ArgGroup::new("input").required(true).args(["matrix", "build"])))]
    Decompose {
        /// Matrix text file.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Builder expression, e.g. "pow(elem(1,2),16)".
        #[arg(long)]
        build: Option<String>,
        /// Certificate output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file.
    Check { path: PathBuf },
}

fn main() {
    let args = Args::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let m = args.m.unwrap_or(2);
    let code = match &args.command {
        Command::Word { text } => cli::cmd_word(&mut out, text, args.n, args.m, args.report),
        Command::Aut { images } => cli::cmd_aut(&mut out, images, args.report),
        Command::Ideal { poly, ideal } => cli::cmd_ideal(&mut out, poly, ideal, args.n, args.report),
        Command::Verify { suite } => cli::cmd_verify(&mut out, suite, args.n, m, args.report),
        Command::Decompose { matrix, build, out: dest } => {
            let src = match (matrix, build) {
                (Some(p), _) => MatrixSource::File(p.clone()),
                (None, Some(e)) => MatrixSource::Builder(e.clone()),
                (None, None) => unreachable!("clap enforces the input group"),
            };
            cli::cmd_decompose(&mut out, &src, args.n, m, dest.as_deref(), args.report)
        }
        Command::Check { path } => cli::cmd_check(&mut out, path, args.report),
    };
    let _ = out.flush();
    std::process::exit(code);
}
