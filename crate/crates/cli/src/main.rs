mod cache;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arrfac::factor::{Hereditary, TableOutcome};
use arrfac::lattice::render_factored;
use arrfac::linform::render_source;
use arrfac::os_algebra::os_poincare;
use arrfac::{parse_arrangement_file, try_factor_linear, Arrangement, Certificate, Config, Flat, Lattice, Partition, Session};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "arr", version, about = "Factorization checks for central hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Refuse searches over more transversals than this.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_transversals: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Flats by rank with their Möbius values.
    Lattice { file: PathBuf },
    /// Poincaré polynomial, factored when it splits over the integers.
    Poincare { file: PathBuf },
    /// Decide a property and print its certificate.
    Check {
        property: CheckProperty,
        file: PathBuf,
        /// Blocks separated by `|`, 1-based hyperplanes by `,`.
        #[arg(long)]
        partition: Option<String>,
        /// With `check nice`: also report the addition-deletion statements for this hyperplane.
        #[arg(long)]
        pivot: Option<usize>,
        /// Property tested on every restriction by `check hereditary`.
        #[arg(long, value_enum, default_value_t = HereditaryOf::Factored)]
        of: HereditaryOf,
    },
    /// Search for partitions.
    Find {
        what: FindWhat,
        file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Induction table of factorizations.
    Table {
        file: PathBuf,
        /// Addition order, 1-based; defaults to the file order minus the seed.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Arrangement file of the starting subarrangement, with its partition.
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Final partition to steer the blocks; defaults to the file's partition.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Restriction to the flat spanned by the given hyperplanes.
    Restrict {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<usize>,
    },
    /// Localization at the flat spanned by the given hyperplanes.
    Localize {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<usize>,
    },
    /// Product of two arrangements over the same field.
    Product { first: PathBuf, second: PathBuf },
    /// Compare the Orlik–Solomon and lattice Poincaré polynomials, and κ with niceness.
    OsVerify {
        file: PathBuf,
        #[arg(long)]
        partition: Option<String>,
    },
    /// Deletion and restriction at a hyperplane.
    Triple {
        file: PathBuf,
        #[arg(long)]
        pivot: usize,
        #[arg(long)]
        partition: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProperty {
    Nice,
    Independent,
    Supersolvable,
    IndFree,
    IndFactored,
    Hereditary,
}

#[derive(Clone, Copy, ValueEnum)]
enum HereditaryOf {
    Factored,
    IndFactored,
    IndFree,
}

#[derive(Clone, Copy, ValueEnum)]
enum FindWhat {
    Nice,
}

enum Failure {
    Usage(String),
    Cap(String),
    Other(String),
}

impl From<arrfac::Error> for Failure {
    fn from(e: arrfac::Error) -> Self {
        use arrfac::Error::*;
        match e {
            _ if e.is_cap() => Failure::Cap(e.to_string()),
            NotAPartition(_) | BadOrder(_) | BadSeed(_) | PivotNotInBlock { .. } | OutOfRange(_) | NotAFlat => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

struct Input {
    a: Arrangement,
    partition: Option<String>,
}

fn read(path: &Path) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    let src = parse_arrangement_file(&bytes).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    Ok(Input { a: Arrangement::from_source(&src)?, partition: src.partition })
}

fn partition_of(input: &Input, flag: Option<&str>, fallback: bool) -> Result<Option<Partition>, Failure> {
    let text = match flag {
        Some(t) => Some(t),
        None if fallback => input.partition.as_deref(),
        None => None,
    };
    match text {
        Some(t) => {
            let p = Partition::parse(t)?;
            p.validate(input.a.len())?;
            Ok(Some(p))
        }
        None => Ok(None),
    }
}

fn need_partition(input: &Input, flag: Option<&str>) -> Result<Partition, Failure> {
    partition_of(input, flag, true)?.ok_or_else(|| Failure::Usage("a partition is required (--partition or a `partition` field)".into()))
}

fn index(i: usize, n: usize) -> Result<usize, Failure> {
    if i == 0 || i > n {
        return Err(Failure::Usage(format!("hyperplane {i} is out of range 1..={n}")));
    }
    Ok(i - 1)
}

fn flat_at(a: &Arrangement, at: &[usize]) -> Result<Flat, Failure> {
    let idx = at.iter().map(|&i| index(i, a.len())).collect::<Result<Vec<_>, _>>()?;
    Ok(Flat::from_hyperplanes(a, &idx)?)
}

fn certificate_out(cert: &Certificate, json: bool) -> String {
    if json {
        serde_json::to_string_pretty(cert).expect("serializable")
    } else {
        render::certificate(cert)
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    if g.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let session = Session::new(Config { max_transversals: g.max_transversals, jobs: g.jobs });
    let s = &session;
    match cli.command {
        Command::Lattice { file } => {
            let a = read(&file)?.a;
            let lat = Lattice::build(&a);
            if g.json {
                let flats: Vec<_> = lat
                    .flats()
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        json!({
                            "rank": x.rank(),
                            "hyperplanes": x.members().iter().map(|m| m + 1).collect::<Vec<_>>(),
                            "mobius": lat.mobius(i).to_string(),
                        })
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&flats).expect("serializable"))
            } else {
                Ok(render::lattice(&lat))
            }
        }
        Command::Poincare { file } => {
            let a = read(&file)?.a;
            let pi = Lattice::build(&a).poincare();
            let factors = try_factor_linear(&pi);
            if g.json {
                Ok(serde_json::to_string_pretty(&json!({ "poincare": pi, "factors": factors })).expect("serializable"))
            } else {
                Ok(match factors {
                    Some(f) => render_factored(&f),
                    None => pi.to_string(),
                })
            }
        }
        Command::Check { property, file, partition, pivot, of } => {
            let input = read(&file)?;
            let a = &input.a;
            let flag = partition.as_deref();
            let (tag, p) = match property {
                CheckProperty::Nice | CheckProperty::Independent => {
                    let p = need_partition(&input, flag)?;
                    (p.to_string(), Some(p))
                }
                CheckProperty::IndFactored => {
                    let p = partition_of(&input, flag, false)?;
                    (p.as_ref().map(ToString::to_string).unwrap_or_default(), p)
                }
                _ => (String::new(), None),
            };
            let name = match (property, of) {
                (CheckProperty::Nice, _) => "nice",
                (CheckProperty::Independent, _) => "independent",
                (CheckProperty::Supersolvable, _) => "supersolvable",
                (CheckProperty::IndFree, _) => "ind-free",
                (CheckProperty::IndFactored, _) => "ind-factored",
                (CheckProperty::Hereditary, HereditaryOf::Factored) => "hereditary-factored",
                (CheckProperty::Hereditary, HereditaryOf::IndFactored) => "hereditary-ind-factored",
                (CheckProperty::Hereditary, HereditaryOf::IndFree) => "hereditary-ind-free",
            };
            let key = cache::key(name, a, &tag);
            let cert = match cache::load(&key).filter(|c| s.verify(a, c).unwrap_or(false)) {
                Some(c) => c,
                None => {
                    let c = match property {
                        CheckProperty::Nice => s.is_nice(a, p.as_ref().unwrap())?,
                        CheckProperty::Independent => s.is_independent(a, p.as_ref().unwrap())?,
                        CheckProperty::Supersolvable => s.is_supersolvable(a),
                        CheckProperty::IndFree => s.is_inductively_free(a),
                        CheckProperty::IndFactored => match &p {
                            Some(p) => s.is_inductive_factorization(a, p)?,
                            None => s.is_inductively_factored(a)?,
                        },
                        CheckProperty::Hereditary => {
                            let which = match of {
                                HereditaryOf::Factored => Hereditary::Factored,
                                HereditaryOf::IndFactored => Hereditary::InductivelyFactored,
                                HereditaryOf::IndFree => Hereditary::InductivelyFree,
                            };
                            s.hereditary_check(a, which)?
                        }
                    };
                    cache::store(&key, &c);
                    c
                }
            };
            let mut out = certificate_out(&cert, g.json);
            if let (CheckProperty::Nice, Some(h)) = (property, pivot) {
                let r = s.add_del_check(a, p.as_ref().unwrap(), index(h, a.len())?)?;
                if g.json {
                    out = serde_json::to_string_pretty(&json!({ "certificate": cert, "addition_deletion": r })).expect("serializable");
                } else {
                    out.push('\n');
                    out.push_str(&render::add_del(&r));
                }
            }
            Ok(out)
        }
        Command::Find { what: FindWhat::Nice, file, limit } => {
            let a = read(&file)?.a;
            let found = s.find_nice_partitions(&a, limit)?;
            if g.json {
                Ok(serde_json::to_string_pretty(&found).expect("serializable"))
            } else if found.is_empty() {
                Ok("no nice partition".into())
            } else {
                Ok(found.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
            }
        }
        Command::Table { file, order, seed, partition } => {
            let input = read(&file)?;
            let a = &input.a;
            let target = partition_of(&input, partition.as_deref(), true)?;
            let seed = match &seed {
                Some(path) => {
                    let si = read(path)?;
                    let sp = need_partition(&si, None)?;
                    Some((si.a, sp))
                }
                None => None,
            };
            let order: Vec<usize> = match order {
                Some(o) => o.iter().map(|&i| index(i, a.len())).collect::<Result<_, _>>()?,
                None => {
                    let in_seed = |i: usize| seed.as_ref().is_some_and(|(sa, _)| sa.position(&a.hyperplanes()[i]).is_some());
                    (0..a.len()).filter(|&i| !in_seed(i)).collect()
                }
            };
            let outcome = s.emit_induction_table(a, &order, seed.as_ref().map(|(sa, sp)| (sa, sp)), target.as_ref())?;
            if g.json {
                return Ok(serde_json::to_string_pretty(&outcome).expect("serializable"));
            }
            Ok(match outcome {
                TableOutcome::Table(t) => t.render().trim_end().to_string(),
                TableOutcome::Stuck(st) => format!(
                    "no admissible block at step {} adding hyperplane {} to {}",
                    st.step,
                    st.hyperplane + 1,
                    render::partition(&st.partition_before)
                ),
            })
        }
        Command::Restrict { file, at } => {
            let a = read(&file)?.a;
            let x = flat_at(&a, &at)?;
            Ok(render_source(&a.restrict(&x)?.to_source(), true))
        }
        Command::Localize { file, at } => {
            let a = read(&file)?.a;
            let x = flat_at(&a, &at)?;
            Ok(render_source(&a.localize(&x)?.to_source(), true))
        }
        Command::Product { first, second } => {
            let (a, b) = (read(&first)?.a, read(&second)?.a);
            Ok(render_source(&a.product(&b)?.to_source(), true))
        }
        Command::OsVerify { file, partition } => {
            let input = read(&file)?;
            let a = &input.a;
            let os = os_poincare(a)?;
            let lat = Lattice::build(a).poincare();
            let kappa = match partition_of(&input, partition.as_deref(), true)? {
                Some(p) => Some((s.kappa_is_isomorphism(a, &p)?, s.is_nice(a, &p)?.verdict)),
                None => None,
            };
            if g.json {
                let k = kappa.as_ref().map(|(c, nice)| json!({ "certificate": c, "nice": nice, "agree": c.verdict == *nice }));
                return Ok(serde_json::to_string_pretty(&json!({
                    "os_poincare": os,
                    "lattice_poincare": lat,
                    "agree": os == lat,
                    "kappa": k,
                }))
                .expect("serializable"));
            }
            let mut out = format!("Orlik-Solomon: {os}\nlattice:       {lat}\nagree: {}", os == lat);
            if let Some((c, nice)) = kappa {
                out.push_str(&format!("\n\n{}\nnice: {nice}\nagree: {}", render::certificate(&c), c.verdict == nice));
            }
            Ok(out)
        }
        Command::Triple { file, pivot, partition } => {
            let input = read(&file)?;
            let a = &input.a;
            let h = index(pivot, a.len())?;
            let t = a.triple(h)?;
            let p = partition_of(&input, partition.as_deref(), true)?;
            let report = match &p {
                Some(p) => Some((arrfac::factor::restriction_map(a, p, h)?, s.add_del_check(a, p, h)?)),
                None => None,
            };
            if g.json {
                return Ok(serde_json::to_string_pretty(&json!({
                    "pivot": pivot,
                    "form": a.form_string(h),
                    "deleted": t.deleted.to_string(),
                    "restricted": t.restricted.to_string(),
                    "trace": t.trace.iter().map(|x| x.map(|j| j + 1)).collect::<Vec<_>>(),
                    "addition_deletion": report.as_ref().map(|(_, r)| r),
                    "induced": report.as_ref().and_then(|(m, _)| m.induced.clone()),
                }))
                .expect("serializable"));
            }
            let mut out = format!(
                "pivot:      {} = {}\ndeletion:   {}\nrestriction: {}",
                pivot,
                a.form_string(h),
                t.deleted,
                t.restricted
            );
            if let Some((m, r)) = report {
                out.push_str(&format!(
                    "\nrestriction map: injective {}, surjective {}",
                    m.injective, m.surjective
                ));
                if let Some(q) = &m.induced {
                    out.push_str(&format!("\ninduced partition: {q}"));
                }
                out.push('\n');
                out.push_str(&render::add_del(&r));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("arr: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("arr: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("arr: {m}");
            ExitCode::from(1)
        }
    }
}
