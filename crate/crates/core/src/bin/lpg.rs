use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lpg::builder::build;
use lpg::glex::glex;
use lpg::infbwt::infbwt;
use lpg::io::bench::bench;
use lpg::io::{read_archive, read_reads, write_archive, write_ebrl, ReadFormat};
use lpg::oracle::oracle_ebwt_reads;
use lpg::tree::{GrammarTree, LabelMode};

#[derive(Parser)]
#[command(name = "lpg", version, about = "Grammar compression of read collections, with eBWT construction from the grammar")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Labels {
    Fixed,
    Huffman,
}

impl From<Labels> for LabelMode {
    fn from(l: Labels) -> Self {
        match l {
            Labels::Fixed => LabelMode::Fixed,
            Labels::Huffman => LabelMode::Huffman,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Fasta,
    Fastq,
    Lines,
}

impl From<Format> for ReadFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Fasta => ReadFormat::Fasta,
            Format::Fastq => ReadFormat::Fastq,
            Format::Lines => ReadFormat::Lines,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compress a FASTA, FASTQ or one-read-per-line file.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "huffman")]
        labels: Labels,
        /// Input format; detected from the first byte when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write every read of an archive, one per line.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print one read (0-based index).
    Extract {
        input: PathBuf,
        #[arg(long)]
        read: usize,
    },
    /// Compute the eBWT of an archive's reads.
    Ebwt {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write runs as EBRL records instead of plain bytes.
        #[arg(long)]
        rle: bool,
    },
    /// Check the grammar-based eBWT against a direct computation.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Report compression ratio, random access time and GLex time as JSON.
    Bench {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, value_enum, default_value = "huffman")]
        labels: Labels,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: Cli) -> lpg::Result<ExitCode> {
    match cli.cmd {
        Cmd::Compress { input, output, labels, format } => {
            let rc = read_reads(&input, format.map(Into::into))?;
            let gt = GrammarTree::encode(&build(&rc), labels.into())?;
            write_archive(&output, &gt)?;
        }
        Cmd::Decompress { input, output } => {
            let gt = read_archive(&input)?;
            let mut w = BufWriter::new(File::create(output)?);
            for j in 0..gt.m() {
                w.write_all(&gt.extract_read(j)?)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        Cmd::Extract { input, read } => {
            let gt = read_archive(&input)?;
            let mut out = gt.extract_read(read)?;
            out.push(b'\n');
            std::io::stdout().write_all(&out)?;
        }
        Cmd::Ebwt { input, output, rle } => {
            let gt = read_archive(&input)?;
            let e = infbwt(&gt, &glex(&gt)?)?;
            let mut w = BufWriter::new(File::create(output)?);
            if rle {
                write_ebrl(&mut w, &e, gt.alphabet())?;
            } else {
                w.write_all(&e.to_bytes(gt.alphabet()))?;
            }
            w.flush()?;
        }
        Cmd::Verify { input, format } => {
            let rc = read_reads(&input, format.map(Into::into))?;
            let want = oracle_ebwt_reads(&rc)?;
            let gt = GrammarTree::encode(&build(&rc), LabelMode::Huffman)?;
            let got = infbwt(&gt, &glex(&gt)?)?;
            if got != want {
                eprintln!("eBWT mismatch");
                return Ok(ExitCode::from(2));
            }
            println!("ok: {} reads, {} symbols", rc.m(), rc.n());
        }
        Cmd::Bench { input, format, labels, trials, seed } => {
            let rc = read_reads(&input, format.map(Into::into))?;
            let report = bench(&rc, labels.into(), trials, seed)?;
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lpg: {e}");
            ExitCode::FAILURE
        }
    }
}
