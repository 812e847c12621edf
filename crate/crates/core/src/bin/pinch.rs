use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cyclic_pinch::amalgam::{intertwining_violations, Factors, SigmaSnapshot, SigmaState};
use cyclic_pinch::generic::{folner_ratio, folner_set, orbit_census, GenericAction};
use cyclic_pinch::nielsen::zero_sum_automorphism;
use cyclic_pinch::pipeline::{run_pipeline, surface_preset, verify_outputs, PipelineConfig, ENV_OUT_DIR};
use cyclic_pinch::snapshot::{export_graph, ActionSnapshot, ExportFormat};
use cyclic_pinch::word::{Alphabet, Word};
use cyclic_pinch::{Error, Result};

#[derive(Parser)]
#[command(name = "pinch", version, about = "Actions of cyclically pinched amalgams on the integers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free-group word utilities.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Runs the full pipeline from a JSON config and writes snapshots and reports.
    Build {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; falls back to the config, then $PINCH_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the padding seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rechecks a finished run from its files alone.
    Verify {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Nontrivial and trivial orbit counts of `c` (or `d`) on a factor's window.
    Orbits {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Side::G)]
        factor: Side,
    },
    /// Følner ratios of the size-k set of a factor.
    Folner {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Side::G)]
        factor: Side,
    },
    /// Summary of the saved intertwiner and its violations.
    Sigma {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Schreier graph of a saved action.
    Export {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Draw `b` edges as well.
        #[arg(long)]
        beta: bool,
        /// Label `α`-edges as `x<i>` instead of `a<i>`.
        #[arg(long)]
        second: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ready-made configs.
    Preset {
        #[command(subcommand)]
        preset: Preset,
    },
}

#[derive(Subcommand)]
enum WordOp {
    /// Free reduction.
    Reduce { word: String },
    /// Cyclic reduction `w = u·core·u⁻¹`.
    Cyclic { word: String },
    /// Exponent sums of every generator.
    Sums {
        word: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Nielsen moves giving some occurring generator exponent sum 0.
    Autzero {
        word: String,
        #[arg(long)]
        rank: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Preset {
    /// Genus-g surface group split along a separating curve.
    Surface {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    G,
    H,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

fn out_dir(dir: Option<PathBuf>) -> Result<PathBuf> {
    dir.or_else(|| std::env::var_os(ENV_OUT_DIR).map(PathBuf::from))
        .ok_or_else(|| Error::Config(format!("no directory given and ${ENV_OUT_DIR} is unset")))
}

fn word_arg(text: &str) -> Result<Word> {
    text.parse().map_err(|e: Error| Error::Config(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn status(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

struct Loaded {
    config: PipelineConfig,
    c: Word,
    d: Word,
    g: GenericAction,
    h: GenericAction,
}

fn load(dir: &Path) -> Result<Loaded> {
    let config = PipelineConfig::load(&dir.join("config.json"))?;
    let (c, d) = config.validate()?;
    let g = GenericAction::from_state(&c, ActionSnapshot::load(&dir.join("g_action.json"))?.to_state()?);
    let h = GenericAction::from_state(&d, ActionSnapshot::load(&dir.join("h_action.json"))?.to_state()?);
    Ok(Loaded { config, c, d, g, h })
}

fn word_op(op: WordOp) -> Result<ExitCode> {
    match op {
        WordOp::Reduce { word } => println!("{}", word_arg(&word)?.free_reduce()),
        WordOp::Cyclic { word } => {
            let (u, core) = word_arg(&word)?.cyclic_reduce();
            println!("conjugator: {u}");
            println!("core: {core}");
        }
        WordOp::Sums { word, rank } => {
            let w = word_arg(&word)?;
            let rank = rank.unwrap_or(w.max_gen().unwrap_or(0));
            for (g, s) in w.abelianization(rank + 1).into_iter().enumerate() {
                println!("{}: {s}", Alphabet::First.letter_name(g));
            }
        }
        WordOp::Autzero { word, rank } => {
            let w = word_arg(&word)?;
            let rank = rank.unwrap_or(w.max_gen().unwrap_or(0));
            let z = zero_sum_automorphism(&w.abelianization(rank + 1), &w)?;
            println!("{}", serde_json::to_string_pretty(&z)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Word { op } => word_op(op),
        Cmd::Build { config, out, seed } => {
            let mut config = PipelineConfig::load(&config)?;
            if let Some(s) = seed {
                config.seed = s;
            }
            let dir = out.or_else(|| config.resolved_out_dir()).unwrap_or_else(|| PathBuf::from("pinch-out"));
            let run = run_pipeline(&config)?;
            for path in run.write_outputs(&dir)? {
                println!("wrote {}", path.display());
            }
            for (name, ok) in &run.report.checks {
                println!("{name:<18} {}", if *ok { "ok" } else { "FAILED" });
            }
            Ok(status(run.passed()))
        }
        Cmd::Verify { dir } => {
            let report = verify_outputs(&out_dir(dir)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(status(report.passed))
        }
        Cmd::Orbits { dir, factor } => {
            let l = load(&out_dir(dir)?)?;
            let (a, w) = match factor {
                Side::G => (&l.g, &l.c),
                Side::H => (&l.h, &l.d),
            };
            let census = orbit_census(&a.closed, w, a.window(l.config.window_margin));
            println!("{}", serde_json::to_string_pretty(&census)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Folner { dir, k, factor } => {
            let l = load(&out_dir(dir)?)?;
            let (a, w, alphabet) = match factor {
                Side::G => (&l.g, &l.c, Alphabet::First),
                Side::H => (&l.h, &l.d, Alphabet::Second),
            };
            let set = folner_set(&a.plan, w, k, &a.closed)?.to_set();
            println!("set: {}..={}", set.first().unwrap(), set.last().unwrap());
            let mut ok = true;
            for gen in 0..=a.rank() {
                let r = folner_ratio(&a.closed, &set, &Word::letter(gen))?;
                ok &= r * k as i64 <= 2.into();
                println!("{}: {r}", alphabet.letter_name(gen));
            }
            Ok(status(ok))
        }
        Cmd::Sigma { dir } => {
            let dir = out_dir(dir)?;
            let l = load(&dir)?;
            let snap: SigmaSnapshot = serde_json::from_str(&std::fs::read_to_string(dir.join("sigma.json"))?)?;
            let sigma = SigmaState::from_snapshot(&snap)?;
            let margin = l.config.window_margin;
            let lo = l.g.state.origin().min(l.h.state.origin()) - margin;
            let hi = [l.g.state.next_free(), l.h.state.next_free(), sigma.max_point().unwrap_or(lo)]
                .into_iter()
                .max()
                .unwrap()
                + margin;
            let f = Factors {
                ga: &l.g.closed,
                ha: &l.h.closed,
                c: &l.c,
                d: &l.d,
                window: cyclic_pinch::generic::Interval::new(lo, hi),
            };
            let violations = intertwining_violations(&sigma, &f);
            println!("moved points: {}", sigma.pairs().count());
            println!("orbit matches: {}", sigma.orbit_matches().len());
            println!("pinned: {}", sigma.pinned().len());
            println!("window: [{lo}, {hi}]");
            println!("violations: {violations:?}");
            Ok(status(violations.is_empty()))
        }
        Cmd::Export { snapshot, format, beta, second, out } => {
            let snap = ActionSnapshot::load(&snapshot)?;
            let format = match format {
                Format::Dot => ExportFormat::Dot,
                Format::Json => ExportFormat::Json,
            };
            let alphabet = if second { Alphabet::Second } else { Alphabet::First };
            emit(&export_graph(&snap, format, beta, alphabet)?, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Preset { preset: Preset::Surface { genus, out } } => {
            emit(&surface_preset(genus)?.to_json(), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
