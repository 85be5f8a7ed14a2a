//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure (or a non-exhaustive greedy
//! path), 2 argument errors, 3 capacity errors.

use std::io::{self, BufRead, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, decimal, verify_listing};
use crate::error::Error;
use crate::generation::{
    self, greedy_walk, walk_flipseq, ListingVisitor, Method, Priority, SuccessorWalk, DEFAULT_BUDGET,
};
use crate::genseq::FlipSeqIter;
use crate::perm::{ColouredPermutation, PermSpace};
use crate::rank;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Greedy methods warn above this many permutations.
const GREEDY_WARN: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "kpancake", version, about = "Flip Gray code for k-coloured permutations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every coloured permutation, one per line, then `total:<count>`.
    Gen {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = MethodArg::Flipseq)]
        method: MethodArg,
        /// Start permutation (recursive and flipseq only).
        #[arg(long)]
        start: Option<String>,
        /// Flush after every line.
        #[arg(long)]
        stream: bool,
    },
    /// Print the flip sequence, one length per line.
    Flipseq {
        #[command(flatten)]
        size: Size,
    },
    /// Position of a permutation in the canonical listing.
    Rank {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        perm: String,
    },
    /// Permutation at a position of the canonical listing.
    Unrank {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        rank: u64,
    },
    /// Next permutation in the canonical cyclic listing and the flip used.
    Successor {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        perm: String,
    },
    /// Check a listing read from stdin; exits 0 iff it is a Hamilton cycle.
    Verify {
        #[command(flatten)]
        size: Size,
    },
    /// Average flip length against the bound e^(1/k).
    Stats {
        #[command(flatten)]
        size: Size,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Size {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    GreedyMin,
    GreedyMax,
    Recursive,
    Successor,
    Flipseq,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::GreedyMin => Method::GreedyMin,
            MethodArg::GreedyMax => Method::GreedyMax,
            MethodArg::Recursive => Method::Recursive,
            MethodArg::Successor => Method::Successor,
            MethodArg::Flipseq => Method::FlipSeq,
        }
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = dispatch(cli.command, stdin, stdout, stderr).and_then(|code| {
        stdout.flush()?;
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Lib(e @ (Error::Capacity { .. } | Error::Budget { .. })) => (EXIT_CAPACITY, e.to_string()),
                Failure::Lib(e) => (EXIT_USAGE, e.to_string()),
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Io(e) => (EXIT_FAILED, format!("i/o error: {e}")),
            };
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Gen { size, method, start, stream } => gen(size, method.into(), start.as_deref(), stream, out, err),
        Command::Flipseq { size } => {
            let space = PermSpace::new(size.n, size.k)?;
            for x in FlipSeqIter::new(&space) {
                writeln!(out, "{x}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Rank { n, k, perm } => {
            let pi = parse_perm(&perm, n, k)?;
            writeln!(out, "{}", rank::rank(&pi))?;
            Ok(EXIT_OK)
        }
        Command::Unrank { size, rank } => {
            let space = PermSpace::new(size.n, size.k)?;
            writeln!(out, "{}", rank::unrank(rank, &space)?)?;
            Ok(EXIT_OK)
        }
        Command::Successor { n, k, perm } => {
            let pi = parse_perm(&perm, n, k)?;
            let j = generation::successor(&pi);
            writeln!(out, "{}", pi.flip(j)?)?;
            writeln!(out, "flip:{j}")?;
            Ok(EXIT_OK)
        }
        Command::Verify { size } => verify(size, stdin, out),
        Command::Stats { size } => stats(size, out),
    }
}

fn parse_perm(text: &str, n: Option<usize>, k: u32) -> Result<ColouredPermutation, Failure> {
    let pi = ColouredPermutation::parse(text, k)?;
    match n {
        Some(n) if n != pi.n() => Err(Failure::Usage(format!("--n {n} but the permutation has {} symbols", pi.n()))),
        _ => Ok(pi),
    }
}

/// Writes each permutation as a line, flushing per line when streaming.
struct LineSink<'a> {
    out: &'a mut dyn Write,
    stream: bool,
    count: u64,
    error: Option<io::Error>,
}

impl LineSink<'_> {
    fn put(&mut self, perm: &ColouredPermutation) {
        if self.error.is_some() {
            return;
        }
        let res = writeln!(self.out, "{perm}").and_then(|_| if self.stream { self.out.flush() } else { Ok(()) });
        match res {
            Ok(()) => self.count += 1,
            Err(e) => self.error = Some(e),
        }
    }

    fn finish(self) -> Result<u64, Failure> {
        match self.error {
            Some(e) => Err(e.into()),
            None => {
                writeln!(self.out, "total:{}", self.count)?;
                Ok(self.count)
            }
        }
    }
}

impl ListingVisitor for LineSink<'_> {
    fn visit(&mut self, perm: &ColouredPermutation) {
        self.put(perm);
    }
}

fn gen(
    size: Size,
    method: Method,
    start: Option<&str>,
    stream: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let space = PermSpace::new(size.n, size.k)?;
    let start = match start {
        Some(text) if !method.accepts_start() => {
            return Err(Failure::Usage(format!("--start is not accepted by method {method} (got `{text}`)")));
        }
        Some(text) => Some(parse_perm(text, Some(size.n), size.k)?),
        None => None,
    };
    let mut sink = LineSink { out, stream, count: 0, error: None };
    match method {
        Method::GreedyMin | Method::GreedyMax => {
            if space.size() > GREEDY_WARN {
                writeln!(err, "warning: greedy needs a visited set of {} bits", space.size())?;
            }
            let priority = if method == Method::GreedyMin { Priority::MinFlip } else { Priority::MaxFlip };
            let summary = greedy_walk(&space, priority, DEFAULT_BUDGET, |p: &ColouredPermutation, _| sink.put(p))?;
            sink.finish()?;
            return Ok(if summary.exhaustive && summary.closing_flip.is_some() { EXIT_OK } else { EXIT_FAILED });
        }
        Method::Recursive => {
            let listing = generation::generate(&space, method, start.as_ref())?;
            listing.iter().for_each(|p| sink.put(p));
        }
        Method::Successor => SuccessorWalk::new(&space).for_each(|p| sink.put(&p)),
        Method::FlipSeq => {
            walk_flipseq(&start.unwrap_or_else(|| space.identity()), &mut sink);
        }
    }
    sink.finish()?;
    Ok(EXIT_OK)
}

fn verify(size: Size, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Outcome {
    let space = PermSpace::new(size.n, size.k)?;
    let mut failure: Option<Failure> = None;
    // Some(None) skips blank and `total:` lines; None stops at the first error
    let perms = stdin
        .lines()
        .map_while(|line| {
            let line = match line {
                Ok(line) => line,
                Err(e) => {
                    failure = Some(e.into());
                    return None;
                }
            };
            let line = line.trim_end();
            if line.is_empty() || line.starts_with("total:") {
                return Some(None);
            }
            match ColouredPermutation::parse(line, size.k) {
                Ok(p) => Some(Some(p)),
                Err(e) => {
                    failure = Some(e.into());
                    None
                }
            }
        })
        .flatten();
    let report = verify_listing(perms, &space);
    if let Some(f) = failure {
        return Err(f);
    }
    write!(out, "{report}")?;
    Ok(if report.is_hamilton_cycle { EXIT_OK } else { EXIT_FAILED })
}

fn stats(size: Size, out: &mut dyn Write) -> Outcome {
    let space = PermSpace::new(size.n, size.k)?;
    let stats = analysis::avg_flip_length(&space);
    writeln!(out, "n:{}", stats.n)?;
    writeln!(out, "k:{}", stats.k)?;
    writeln!(out, "exact:{}", stats.exact_average)?;
    writeln!(out, "decimal:{}", decimal(&stats.exact_average, 15))?;
    writeln!(out, "bound:{:.15}", stats.bound_f64())?;
    writeln!(out, "bound_interval:[{}, {}]", decimal(&stats.bound.lower, 15), decimal(&stats.bound.upper, 15))?;
    writeln!(out, "below_bound:{}", stats.below_bound())?;
    if let Some(emp) = &stats.empirical_average {
        writeln!(out, "empirical:{emp}")?;
        writeln!(out, "empirical_matches:{}", *emp == stats.exact_average)?;
    }
    Ok(EXIT_OK)
}
