use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use flab_core::cosets::MAX_LOW_INDEX;
use flab_core::{
    abelianization, alexander_polynomial, brown_quotient, brown_rank1, brown_rank2, corank_bounds, cyclic_cover,
    decide_fibred, dehn_fill, emit_plot, fibred_obstructions, low_index_subgroups, parse_presentations,
    primitive_characters, reidemeister_schreier, run_batch, simple_form_data, subgroup_homology, to_standard_form,
    todd_coxeter, AbelianStructure, BatchOptions, Character, CorankOptions, Error, FibredOptions, Presentation,
    SubgroupSpec, DEFAULT_MAX_COSETS,
};

// A closed pipe (`flab … | head`) ends output quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

#[derive(Parser)]
#[command(name = "flab", version, about = "Fibredness tools for finitely presented 3-manifold groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and echo normalized presentations.
    Parse { file: PathBuf },
    /// First homology.
    Abelianize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Alexander polynomial and fibring obstructions.
    Alex {
        file: PathBuf,
        /// Rewrite into standard form first and report simple-form data.
        #[arg(long)]
        standard_form: bool,
    },
    /// Brown's criterion for two-generator presentations.
    Bns {
        file: PathBuf,
        /// Character values, one per generator.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "all")]
        char: Option<Vec<i64>>,
        /// Full report over all characters (β₁ = 2).
        #[arg(long)]
        all: bool,
    },
    /// Dehn filling on a cusp.
    Fill {
        file: PathBuf,
        #[arg(long)]
        cusp: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1)]
        slope: Vec<i64>,
    },
    /// Cyclic cover of the given degree, or the subgroup generated by words.
    Cover {
        file: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        char: Option<Vec<i64>>,
        /// Subgroup generators for coset enumeration instead of a cyclic cover.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["degree", "char"])]
        gens: Option<Vec<String>>,
    },
    /// Conjugacy classes of subgroups of small index.
    Subgroups {
        file: PathBuf,
        #[arg(long)]
        max_index: usize,
    },
    /// Run the fibring cascade.
    Fiber {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_cover: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bounds on the rank of the largest free quotient.
    Corank {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_index: usize,
    },
    /// SVG pictures of relators.
    Plot {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fibring cascade over a file of presentations, as JSON lines.
    Batch {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        corank: bool,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
        #[arg(long, default_value_t = 6)]
        max_cover: usize,
    },
}

enum Failure {
    Usage(String),
    Parse(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::UnknownGenerator(_) | Error::BadCount(_) | Error::DuplicateGenerator(_) => {
                Failure::Parse(e.to_string())
            }
            Error::Overflow(_) => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(m)) => {
            eprintln!("parse error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource bound: {m}");
            ExitCode::from(3)
        }
    }
}

fn load(file: &PathBuf) -> std::result::Result<Vec<Presentation>, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    parse_presentations(&text).map_err(|e| Failure::Parse(format!("{}: {e}", file.display())))
}

fn max_cosets() -> std::result::Result<usize, Failure> {
    match std::env::var("FLAB_MAX_COSETS") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("FLAB_MAX_COSETS must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_COSETS),
    }
}

fn homology_string(ab: &AbelianStructure) -> String {
    let mut parts = Vec::new();
    if ab.betti > 0 {
        parts.push(if ab.betti == 1 { "Z".to_string() } else { format!("Z^{}", ab.betti) });
    }
    parts.extend(ab.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Runs `f` on every presentation; a failure is reported and the rest
/// still run. The first failure decides the exit code.
fn each(ps: Vec<Presentation>, mut f: impl FnMut(&Presentation) -> Outcome) -> Outcome {
    if ps.len() == 1 {
        return f(&ps[0]);
    }
    let mut first = None;
    let mut failed = 0;
    for p in &ps {
        if let Err(e) = f(p) {
            let msg = match &e {
                Failure::Usage(m) | Failure::Parse(m) | Failure::Resource(m) => m,
            };
            eprintln!("{}: {msg}", p.name);
            failed += 1;
            first.get_or_insert(e);
        }
    }
    let summary = format!("{failed} of {} presentations failed", ps.len());
    match first {
        None => Ok(()),
        Some(Failure::Usage(_)) => Err(Failure::Usage(summary)),
        Some(Failure::Parse(_)) => Err(Failure::Parse(summary)),
        Some(Failure::Resource(_)) => Err(Failure::Resource(summary)),
    }
}

fn print_json(v: &serde_json::Value) {
    out!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { file } => {
            let ps = load(&file)?;
            let texts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
            print!("{}", texts.join("\n"));
        }
        Command::Abelianize { file, json } => {
            for p in load(&file)? {
                let ab = abelianization(&p);
                if json {
                    print_json(&json!({ "name": p.name, "abelianization": ab }));
                } else {
                    out!("{}: {}", p.name, homology_string(&ab));
                }
            }
        }
        Command::Alex { file, standard_form } => {
            each(load(&file)?, |p| alex(p, standard_form))?;
        }
        Command::Bns { file, char, all } => {
            each(load(&file)?, |p| bns(p, char.as_deref(), all))?;
        }
        Command::Fill { file, cusp, slope } => {
            let [a, b] = slope[..] else {
                return Err(Failure::Usage("--slope takes p,q".into()));
            };
            each(load(&file)?, |p| {
                out!("{}", dehn_fill(p, cusp, a, b)?);
                Ok(())
            })?;
        }
        Command::Cover { file, degree, char, gens } => {
            each(load(&file)?, |p| cover(p, degree, char.as_deref(), gens.as_deref()))?;
        }
        Command::Subgroups { file, max_index } => {
            if max_index > MAX_LOW_INDEX {
                return Err(Failure::Resource(format!("index {max_index} exceeds the supported bound {MAX_LOW_INDEX}")));
            }
            each(load(&file)?, |p| {
                let li = low_index_subgroups(p, max_index)?;
                out!("{}: classes by index {:?}", p.name, li.counts);
                for t in &li.tables {
                    let h = subgroup_homology(p, SubgroupSpec::Table(t))?;
                    out!("  index {}: {}", t.index(), homology_string(&h));
                }
                Ok(())
            })?;
        }
        Command::Fiber { file, max_cover, json } => {
            let opts = FibredOptions { max_cover };
            for p in load(&file)? {
                let v = decide_fibred(&p, &opts);
                if json {
                    print_json(&json!({ "name": p.name, "verdict": v }));
                    continue;
                }
                out!("{}: {:?}{}", p.name, v.status, v.stage.map(|s| format!(" ({s})")).unwrap_or_default());
                for e in &v.evidence {
                    out!("  {}: {}", e.stage, e.result);
                }
                for c in v.caveats.iter().chain(&v.annotations) {
                    out!("  note: {c}");
                }
            }
        }
        Command::Corank { file, max_index } => {
            if max_index > MAX_LOW_INDEX {
                return Err(Failure::Resource(format!("index {max_index} exceeds the supported bound {MAX_LOW_INDEX}")));
            }
            let opts = CorankOptions { max_index, ..Default::default() };
            for p in load(&file)? {
                let r = corank_bounds(&p, &opts);
                out!("{}: corank in [{}, {}]", p.name, r.lower, r.upper);
                for e in &r.evidence {
                    out!("  {e}");
                }
            }
        }
        Command::Plot { file, out } => {
            each(load(&file)?, |p| {
                for path in emit_plot(p, &out)? {
                    out!("{}", path.display());
                }
                Ok(())
            })?;
        }
        Command::Batch { file, out, jobs, corank, timings, max_cover } => {
            // Parse errors are per entry, so the input only has to be readable.
            let opts = BatchOptions { jobs, corank, timings, fibred: FibredOptions { max_cover }, ..Default::default() };
            let s = run_batch(&file, &out, &opts)?;
            out!(
                "{} entries: {} fibred, {} not fibred, {} unknown, {} errors",
                s.total, s.fibred, s.not_fibred, s.unknown, s.errors
            );
        }
    }
    Ok(())
}

fn alex(p: &Presentation, standard_form: bool) -> Outcome {
    let work = if standard_form {
        let (std, log) = to_standard_form(p);
        out!("{}: standard form after {} moves", p.name, log.moves.len());
        print!("{std}");
        std
    } else {
        p.clone()
    };
    let data = alexander_polynomial(&work)?;
    let obs = fibred_obstructions(&data.delta, &data.basis, &work.flags);
    out!("{}: delta = {} in {}", p.name, data.render_delta(), data.basis.var_names.join(","));
    let fired = obs.fired();
    if !fired.is_empty() {
        out!("  obstructions: {}", fired.join(", "));
    }
    if standard_form && data.basis.betti == 1 {
        if let Ok(sf) = simple_form_data(&work, 0) {
            out!("  simple form: lead {} trail {}", sf.lead, sf.trail);
            if let Some(c) = sf.monodromy_charpoly {
                out!("  monodromy characteristic polynomial: {}", c.render(&data.basis.var_names));
            }
        }
    }
    Ok(())
}

fn bns(p: &Presentation, char: Option<&[i64]>, all: bool) -> Outcome {
    if p.rank() != 2 {
        return Err(Failure::Usage("Brown's test needs two generators".into()));
    }
    if let Some(values) = char {
        let chi = Character::new(values.to_vec());
        if p.relators.len() == 1 {
            let r = brown_rank1(&p.relators[0], &chi)?;
            out!("{}: chi {:?}: kernel {}", p.name, values, if r.fg_kernel { "finitely generated" } else { "not finitely generated" });
            out!("  heights {:?}", r.walk.heights);
        } else {
            for i in 0..p.relators.len() {
                match brown_quotient(p, i, &chi) {
                    Ok(q) => out!("{}: relator {i}: kernel in quotient {}", p.name, if q.fg_kernel_in_quotient { "finitely generated" } else { "not finitely generated" }),
                    Err(e) => out!("{}: relator {i}: {e}", p.name),
                }
            }
        }
        return Ok(());
    }
    if p.relators.len() != 1 {
        return Err(Failure::Usage("give --char for multi-relator presentations".into()));
    }
    let ab = abelianization(p);
    if ab.betti == 2 || all {
        let rep = brown_rank2(&p.relators[0])?;
        out!("{}: exceptional rays {:?}", p.name, rep.exceptional_rays);
        out!("  exceptional cones {}", rep.exceptional_cones.len());
        match rep.fg_witness() {
            Some(d) => out!("  fg witness ({},{})", d.0, d.1),
            None => out!("  no character has finitely generated kernel"),
        }
        return Ok(());
    }
    let chi = primitive_characters(&ab)?.basis[0].clone();
    let r = brown_rank1(&p.relators[0], &chi)?;
    out!("{}: chi {:?}: kernel {}", p.name, chi.values, if r.fg_kernel { "finitely generated" } else { "not finitely generated" });
    out!("  heights {:?}", r.walk.heights);
    Ok(())
}

fn cover(p: &Presentation, degree: Option<usize>, char: Option<&[i64]>, gens: Option<&[String]>) -> Outcome {
    let table = if let Some(ws) = gens {
        let words = ws.iter().map(|w| p.parse_word(w)).collect::<flab_core::Result<Vec<_>>>()?;
        todd_coxeter(p, &words, max_cosets()?)?
    } else {
        let n = degree.ok_or_else(|| Failure::Usage("give --degree or --gens".into()))?;
        let chi = match char {
            Some(v) => Character::new(v.to_vec()),
            None => primitive_characters(&abelianization(p))?
                .unique()
                .cloned()
                .ok_or_else(|| Failure::Usage("β₁ > 1: give --char".into()))?,
        };
        cyclic_cover(p, &chi, n)?
    };
    let sub = reidemeister_schreier(p, &table)?.simplified(&[]);
    out!("{}: index {}", p.name, table.index());
    print!("{}", sub.presentation);
    let names = sub.presentation.names();
    for (g, w) in names.iter().zip(sub.format_inclusion()) {
        out!("  {g} = {w}");
    }
    out!("  homology {}", homology_string(&abelianization(&sub.presentation)));
    Ok(())
}
