use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vgroups_core::braid::forbidden_relations;
use vgroups_core::homcount::DEFAULT_CAP;
use vgroups_core::markov::{fuzz, FuzzConfig, FuzzInvariant};
use vgroups_core::present::{
    free_rank_certificate, group_of_classical_link, group_of_virtual_link, group_of_welded_link,
    wada_group, DEFAULT_BUDGET,
};
use vgroups_core::{
    abelian_invariants, count_homs, tietze_simplify, BraidWord, FiniteGroupTable, HomCountOptions,
    Presentation, RepKind, Representation, Theory, Word,
};

mod examples;

const CAP_ENV: &str = "VGROUPS_HOM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "vgroups",
    version,
    about = "Group invariants of virtual and welded braid closures"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Worker threads for parallel steps (results do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct BraidArgs {
    #[arg(long)]
    strands: usize,
    #[arg(long, default_value = "virtual")]
    theory: Theory,
    /// Space-separated letters s<k>, s<k>^-1, r<k>, a<k>; `1` for the empty word.
    #[arg(long)]
    word: String,
}

impl BraidArgs {
    fn braid(&self) -> Result<BraidWord, Failure> {
        Ok(BraidWord::parse(&self.word, self.strands, self.theory)?)
    }
}

#[derive(Debug, clap::Args)]
struct InputArgs {
    /// Presentation file (text or structured); standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl InputArgs {
    fn presentation(&self) -> Result<Presentation, Failure> {
        let text = match &self.input {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| Failure::Compute(format!("cannot read {}: {e}", path.display())))?,
            None => {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Failure::Compute(format!("cannot read standard input: {e}")))?;
                buf
            }
        };
        Ok(Presentation::parse_any(&text)?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and normalize a braid word.
    Parse(BraidArgs),
    /// Evaluate a braid under a representation.
    Act {
        #[command(flatten)]
        braid: BraidArgs,
        /// artin, psi, welded, wada1..wada4
        #[arg(long, default_value = "psi")]
        rep: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        wada_h: i64,
        /// Apply the result to this free-group word instead of listing images.
        #[arg(long)]
        on: Option<String>,
    },
    /// Presentation of the group of the braid closure.
    Present {
        #[command(flatten)]
        braid: BraidArgs,
        /// Wada group of this type (1 or 2) instead of the link group.
        #[arg(long)]
        wada: Option<u8>,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        wada_h: i64,
    },
    /// Tietze-simplify a presentation.
    Simplify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Abelian invariants of a presentation.
    Abelianize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Count homomorphisms into finite groups.
    Homcount {
        #[command(flatten)]
        input: InputArgs,
        /// sym3, sym4, alt4, d4, c<k> or table:<path>; repeatable.
        #[arg(long, required = true)]
        group: Vec<String>,
        /// Enumeration cap (defaults to $VGROUPS_HOM_CAP or 10^8).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Check the defining relations under a representation.
    CheckRelations {
        #[arg(long)]
        strands: usize,
        #[arg(long, default_value = "psi")]
        rep: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        wada_h: i64,
        /// Also check the forbidden relations F1 and F2 (psi only).
        #[arg(long)]
        include_forbidden: bool,
    },
    /// Check fingerprints of closures under random Markov-type moves.
    MarkovFuzz {
        #[arg(long, default_value = "virtual")]
        theory: Theory,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        strands: usize,
        #[arg(long, default_value_t = 10)]
        len: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fingerprint the Wada group of this type (welded only).
        #[arg(long)]
        wada: Option<u8>,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        wada_h: i64,
        /// No move adds a strand beyond this count.
        #[arg(long)]
        max_strands: Option<usize>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Replay the worked examples as a regression suite.
    PaperExamples,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
    Mismatch(String),
}

impl From<vgroups_core::Error> for Failure {
    fn from(e: vgroups_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn default_cap() -> Result<u64, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{CAP_ENV} must be a nonnegative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn representation(rep: &str, wada_h: i64, strands: usize) -> Result<Representation, Failure> {
    let kind: RepKind = rep
        .parse()
        .map_err(|e: vgroups_core::Error| Failure::Usage(e.to_string()))?;
    let kind = match kind {
        RepKind::Wada { kind, .. } => RepKind::wada(kind, wada_h)?,
        other => other,
    };
    Ok(Representation::new(kind, strands)?)
}

fn group_table(group: &str) -> Result<FiniteGroupTable, Failure> {
    match group.strip_prefix("table:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Compute(format!("cannot read {path}: {e}")))?;
            Ok(FiniteGroupTable::parse_table(path, &text)?)
        }
        None => FiniteGroupTable::builtin(group).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn presentation_out(p: &Presentation, format: Format, extra: Value) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Structured => {
            let mut doc = serde_json::to_value(p.to_structured()).expect("serializable");
            if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, extra) {
                doc.extend(extra);
            }
            format!("{doc}\n")
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    let structured = format == Format::Structured;
    match cli.command {
        Command::Parse(args) => {
            let b = args.braid()?;
            let perm = b.underlying_permutation();
            Ok(if structured {
                format!(
                    "{}\n",
                    json!({
                        "strands": b.strands(),
                        "theory": b.theory(),
                        "word": b.to_string(),
                        "length": b.len(),
                        "permutation": perm.images(),
                        "components": b.components(),
                    })
                )
            } else {
                format!(
                    "{b}\nstrands {} theory {} length {} components {}\n",
                    b.strands(),
                    b.theory(),
                    b.len(),
                    b.components()
                )
            })
        }
        Command::Act {
            braid,
            rep,
            wada_h,
            on,
        } => {
            let b = braid.braid()?;
            let rep = representation(&rep, wada_h, b.strands())?;
            let e = rep.evaluate(&b)?;
            if let Some(text) = on {
                let w = Word::parse(&text, rep.ambient())?;
                let image = e.apply(&w)?;
                return Ok(if structured {
                    format!(
                        "{}\n",
                        json!({ "word": w.to_string(), "image": image.to_string() })
                    )
                } else {
                    format!("{image}\n")
                });
            }
            Ok(if structured {
                let images: serde_json::Map<String, Value> = rep
                    .ambient()
                    .generators()
                    .zip(e.images())
                    .map(|(g, w)| (g.to_string(), Value::String(w.to_string())))
                    .collect();
                format!(
                    "{}\n",
                    json!({ "rep": rep.kind().to_string(), "images": images, "identity": e.is_identity() })
                )
            } else {
                format!("{e}")
            })
        }
        Command::Present {
            braid,
            wada,
            wada_h,
        } => {
            let b = braid.braid()?;
            let p = match (wada, b.theory()) {
                (Some(_), t) if t != Theory::Welded => {
                    return Err(Failure::Usage("--wada requires --theory welded".into()))
                }
                (Some(k), _) => wada_group(&b, k, wada_h)?,
                (None, Theory::Virtual) => group_of_virtual_link(&b)?,
                (None, Theory::Welded) => group_of_welded_link(&b)?,
                (None, Theory::Classical) => group_of_classical_link(&b)?,
            };
            Ok(presentation_out(&p, format, json!({})))
        }
        Command::Simplify { input, budget } => {
            let p = input.presentation()?;
            let s = tietze_simplify(&p, budget)?;
            let cert = free_rank_certificate(&s.presentation)?;
            Ok(match format {
                Format::Text => {
                    let mut out = s.presentation.to_string();
                    out.push_str(&format!("# steps {}\n", s.steps));
                    if s.exhausted {
                        out.push_str("# budget exhausted\n");
                    }
                    if let Some(k) = cert {
                        out.push_str(&format!("# free of rank {k}\n"));
                    }
                    out
                }
                Format::Structured => presentation_out(
                    &s.presentation,
                    format,
                    json!({ "steps": s.steps, "exhausted": s.exhausted, "free_rank_certificate": cert }),
                ),
            })
        }
        Command::Abelianize { input } => {
            let ab = abelian_invariants(&input.presentation()?)?;
            Ok(if structured {
                format!(
                    "{}\n",
                    json!({ "free_rank": ab.free_rank, "torsion": ab.torsion, "text": ab.to_string() })
                )
            } else {
                format!("{ab}\n")
            })
        }
        Command::Homcount { input, group, cap } => {
            let groups = group
                .iter()
                .map(|g| group_table(g))
                .collect::<Result<Vec<_>, _>>()?;
            let p = input.presentation()?;
            let opts = HomCountOptions {
                cap: cap.map_or_else(default_cap, Ok)?,
                parallel: true,
            };
            let counts = groups
                .iter()
                .map(|g| Ok((g.name().to_string(), count_homs(&p, g, opts)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(if structured {
                let list: Vec<Value> = counts
                    .iter()
                    .map(|(n, c)| json!({ "group": n, "count": c.to_string() }))
                    .collect();
                format!("{}\n", Value::Array(list))
            } else if counts.len() == 1 {
                format!("{}\n", counts[0].1)
            } else {
                counts.iter().map(|(n, c)| format!("{n} {c}\n")).collect()
            })
        }
        Command::CheckRelations {
            strands,
            rep,
            wada_h,
            include_forbidden,
        } => {
            let rep = representation(&rep, wada_h, strands)?;
            let extra = if include_forbidden {
                if rep.kind() != RepKind::Psi {
                    return Err(Failure::Usage(
                        "--include-forbidden requires --rep psi".into(),
                    ));
                }
                forbidden_relations(strands)
            } else {
                Vec::new()
            };
            let reports = rep.check_relations(&extra)?;
            Ok(if structured {
                let list: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "relation": r.relation.to_string(),
                            "holds": r.holds,
                            "witness": r.witness.as_ref().map(|w| json!({
                                "generator": w.generator.to_string(),
                                "left": w.left.to_string(),
                                "right": w.right.to_string(),
                            })),
                        })
                    })
                    .collect();
                format!("{}\n", Value::Array(list))
            } else {
                reports.iter().map(|r| format!("{r}\n")).collect()
            })
        }
        Command::MarkovFuzz {
            theory,
            trials,
            strands,
            len,
            depth,
            seed,
            wada,
            wada_h,
            max_strands,
            cap,
        } => {
            if theory == Theory::Classical {
                return Err(Failure::Usage("--theory must be virtual or welded".into()));
            }
            if wada.is_some() && theory != Theory::Welded {
                return Err(Failure::Usage("--wada requires --theory welded".into()));
            }
            if let Some(k) = wada {
                if !(1..=2).contains(&k) {
                    return Err(Failure::Usage(format!(
                        "--wada {k}: only types 1 and 2 give invariants"
                    )));
                }
            }
            if strands < 2 {
                return Err(Failure::Usage("--strands must be at least 2".into()));
            }
            let mut cfg = FuzzConfig::new(theory, trials, seed);
            cfg.strands = strands;
            cfg.length = len;
            cfg.depth = depth;
            cfg.max_strands = max_strands.unwrap_or(strands + 2);
            cfg.cap = cap.map_or_else(default_cap, Ok)?;
            if let Some(k) = wada {
                cfg.invariant = FuzzInvariant::Wada { k, h: wada_h };
            }
            let report = fuzz(&cfg)?;
            let text = report.to_string();
            if report.mismatches().count() > 0 {
                return Err(Failure::Mismatch(text));
            }
            Ok(text)
        }
        Command::PaperExamples => {
            let (text, ok) = examples::run();
            if ok {
                Ok(text)
            } else {
                Err(Failure::Mismatch(text))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("vgroups: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("vgroups: usage: --jobs must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool exists already, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let result = run(cli);
    let mut stdout = io::stdout().lock();
    match result {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("vgroups: usage: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("vgroups: error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            eprintln!("vgroups: mismatch: see output above");
            ExitCode::from(3)
        }
    }
}
