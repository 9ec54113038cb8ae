use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lenspec::config::{parse_count, parse_list, KeyValues};
use lenspec::exec::{with_threads, Exec};
use lenspec::field::{FieldDescriptor, NumberField, PrimeIdeal};
use lenspec::interval::DecimalBall;
use lenspec::pipeline::{self, ExtensionSpec, TwinRequest, SCHEMA_VERSION};
use lenspec::quaternion::{self, QuaternionAlgebra, RamificationSet};
use lenspec::search::{self, OverlapPolicy, SearchSpec};
use lenspec::splitting::{self, Frobenius, FrobeniusVector, QuadraticExtension, CYCLOTOMIC_HEIGHT};
use lenspec::volume;
use lenspec::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_NO_TUPLES: u8 = 3;

#[derive(Parser)]
#[command(name = "lenspec", version, about = "Arithmetic orbifolds with prescribed geodesic lengths and bounded volume gaps")]
struct Cli {
    /// Worker threads for the parallel executor.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number-field operations.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Prime-ideal splitting data.
    Primes {
        #[command(subcommand)]
        cmd: PrimesCmd,
    },
    /// Bounded-gap searches.
    Gaps {
        #[command(subcommand)]
        cmd: GapsCmd,
    },
    /// Quaternion algebra checks.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Covolume of a maximal order.
    Volume(VolumeArgs),
    /// Construct or verify twin tuples.
    Twins {
        #[command(subcommand)]
        cmd: TwinsCmd,
    },
    /// Torsion-freeness checks.
    Manifold {
        #[command(subcommand)]
        cmd: ManifoldCmd,
    },
}

#[derive(Subcommand)]
enum FieldCmd {
    Inspect {
        #[arg(long)]
        field: PathBuf,
        /// Also list the prime ideals above each rational prime up to this bound.
        #[arg(long)]
        primes_up_to: Option<u64>,
    },
}

#[derive(Subcommand)]
enum PrimesCmd {
    Frobenius {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        ext: ExtArgs,
        /// A single prime label `p:index`.
        #[arg(long, conflicts_with = "height")]
        prime: Option<String>,
        /// All prime ideals of norm up to this height.
        #[arg(long, value_parser = count)]
        height: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GapsCmd {
    Search {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        ext: ExtArgs,
        /// Target Frobenius vector, e.g. `1,1`.
        #[arg(long)]
        target: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        window: u64,
        #[arg(long, value_parser = count)]
        height: u64,
        #[arg(long, default_value = "sliding")]
        policy: OverlapPolicy,
        /// Prime labels never used.
        #[arg(long)]
        avoid: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    EmbedCheck {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        ram: RamArgs,
        #[command(flatten)]
        ext: ExtArgs,
    },
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long)]
    field: PathBuf,
    #[command(flatten)]
    ram: RamArgs,
    #[arg(long, value_parser = count, default_value = "1e6")]
    zeta_cutoff: u64,
    #[arg(long, default_value_t = volume::DEFAULT_PRECISION)]
    precision: u32,
}

#[derive(Subcommand)]
enum TwinsCmd {
    Construct {
        #[arg(long)]
        request: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Subcommand)]
enum ManifoldCmd {
    Check {
        #[arg(long)]
        field: PathBuf,
        #[command(flatten)]
        ram: RamArgs,
        #[arg(long, default_value_t = pipeline::DEFAULT_TORSION_N_MAX)]
        n_max: u64,
        #[arg(long, value_parser = count, default_value_t = CYCLOTOMIC_HEIGHT)]
        height: u64,
    },
}

#[derive(Args)]
struct ExtArgs {
    /// `trace: <elem>` or `radicand: <elem>`, in the generator `a`.
    #[arg(long = "ext", required = true)]
    ext: Vec<String>,
}

#[derive(Args)]
struct RamArgs {
    /// File with `ram_real:`, `ram_primes:`, `ram_opaque:` lines.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Ramified places: `real:0`, `5:0`, `opaque:label[@norm]`.
    #[arg(long)]
    ram: Vec<String>,
}

fn count(s: &str) -> Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_field(path: &Path) -> anyhow::Result<NumberField> {
    Ok(NumberField::from_descriptor(&FieldDescriptor::parse(&read(path)?)?)?)
}

fn extensions(k: &NumberField, ext: &ExtArgs) -> anyhow::Result<Vec<QuadraticExtension>> {
    ext.ext.iter().map(|e| Ok(ExtensionSpec::parse(e)?.build(k)?.0)).collect()
}

fn ramification(k: &NumberField, args: &RamArgs) -> anyhow::Result<RamificationSet> {
    let (mut real, mut primes, mut opaque) = (Vec::new(), Vec::new(), Vec::new());
    if let Some(path) = &args.algebra {
        let kv = KeyValues::parse(&read(path)?)?;
        kv.check_keys(&["ram_real", "ram_primes", "ram_opaque"])?;
        for s in kv.get("ram_real")?.map(parse_list).transpose()?.unwrap_or_default() {
            real.push(s.parse::<usize>().map_err(|_| anyhow!("ram_real: bad index {s:?}"))?);
        }
        primes.extend(kv.get("ram_primes")?.map(parse_list).transpose()?.unwrap_or_default());
        opaque.extend(kv.get("ram_opaque")?.map(parse_list).transpose()?.unwrap_or_default());
    }
    for item in &args.ram {
        if let Some(i) = item.strip_prefix("real:") {
            real.push(i.parse::<usize>().map_err(|_| anyhow!("--ram {item}: bad real index"))?);
        } else if let Some(o) = item.strip_prefix("opaque:") {
            opaque.push(o.to_string());
        } else {
            primes.push(item.clone());
        }
    }
    let primes: Vec<&str> = primes.iter().map(String::as_str).collect();
    let opaque: Vec<&str> = opaque.iter().map(String::as_str).collect();
    Ok(RamificationSet::from_spec(k, &real, &primes, &opaque)?)
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("schema_version".into(), json!(SCHEMA_VERSION));
        out.extend(std::mem::take(m));
        return Value::Object(out);
    }
    v
}

fn emit(v: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    write_text(serde_json::to_string_pretty(v)?, out)
}

fn write_text(text: String, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

fn prime_json(p: &PrimeIdeal) -> Value {
    json!({ "label": p.label(), "norm": p.norm().to_string(), "factor": p.factor().to_string() })
}

/// Result of a command: JSON already written and an exit code.
type Outcome = anyhow::Result<u8>;

fn field_inspect(path: &Path, primes_up_to: Option<u64>) -> Outcome {
    let k = load_field(path)?;
    let shapes: serde_json::Map<String, Value> =
        k.excluded_primes().iter().filter_map(|&p| k.local_shape(p).map(|s| (p.to_string(), json!(s.to_string())))).collect();
    let mut v = json!({
        "polynomial": k.canonical_polynomial(),
        "degree": k.degree(),
        "signature": k.signature(),
        "poly_discriminant": k.poly_discriminant().to_string(),
        "discriminant": k.discriminant().to_string(),
        "discriminant_source": k.discriminant_source(),
        "excluded_primes": k.excluded_primes(),
        "local_shapes": shapes,
    });
    if let Some(x) = primes_up_to {
        let mut rows = Vec::new();
        for p in lenspec::sieve::primes_up_to(x) {
            if k.is_excluded(p) {
                continue;
            }
            let ps: Vec<Value> = k.factor_prime(p)?.iter().map(prime_json).collect();
            rows.push(json!({ "p": p, "primes": ps }));
        }
        v["primes"] = Value::Array(rows);
    }
    emit(&with_schema(v), None)?;
    Ok(0)
}

fn frobenius_json(k: &NumberField, p: &PrimeIdeal, ls: &[QuadraticExtension]) -> anyhow::Result<Value> {
    let mut v = prime_json(p);
    match splitting::frobenius_vector(k, p, ls)? {
        Frobenius::Vector(f) => v["frobenius"] = json!(f),
        Frobenius::Ramified(idx) => v["ramified_in"] = json!(idx),
    }
    Ok(v)
}

fn primes_frobenius(path: &Path, ext: &ExtArgs, prime: Option<&str>, height: Option<u64>, exec: Exec) -> Outcome {
    let k = load_field(path)?;
    let ls = extensions(&k, ext)?;
    let rows = match (prime, height) {
        (Some(label), _) => vec![frobenius_json(&k, &k.prime_from_label(label)?, &ls)?],
        (None, Some(x)) => splitting::prime_ideals_up_to(&k, x, exec)?
            .iter()
            .map(|p| frobenius_json(&k, p, &ls))
            .collect::<anyhow::Result<_>>()?,
        (None, None) => return Err(anyhow!("give --prime or --height")),
    };
    let labels: Vec<&str> = ls.iter().map(|l| l.label()).collect();
    emit(&with_schema(json!({ "extensions": labels, "primes": rows })), None)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn gaps_search(
    path: &Path,
    ext: &ExtArgs,
    target: &str,
    k_size: usize,
    window: u64,
    height: u64,
    policy: OverlapPolicy,
    avoid: &[String],
    out: Option<&Path>,
    exec: Exec,
) -> Outcome {
    let start = Instant::now();
    let k = load_field(path)?;
    let ls = extensions(&k, ext)?;
    let labels: Vec<String> = ls.iter().map(|l| l.label().to_string()).collect();
    let mut spec = SearchSpec::new(ls, FrobeniusVector::parse(target)?, height, k_size, window);
    spec.policy = policy;
    spec.avoid = avoid.iter().cloned().collect();
    let stream = search::enumerate_target_primes(&k, &spec, exec)?;
    let tuples = search::find_bounded_gap_tuples(&stream, &spec);
    let stats = search::gap_statistics(&k, &stream, &spec);
    let tuples: Vec<Value> = tuples
        .iter()
        .map(|t| json!({ "norms": t.norms(), "span": t.span, "primes": t.primes.iter().map(prime_json).collect::<Vec<_>>() }))
        .collect();
    let v = json!({
        "spec": {
            "field": k.canonical_polynomial(),
            "extensions": labels,
            "target": spec.target,
            "k": k_size,
            "window": window,
            "height": height,
            "policy": policy,
            "avoid": spec.avoid,
        },
        "tuples": tuples,
        "statistics": stats,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    emit(&with_schema(v), out)?;
    Ok(0)
}

fn embed_check(path: &Path, ram: &RamArgs, ext: &ExtArgs) -> Outcome {
    let k = load_field(path)?;
    let b = QuaternionAlgebra::new(ramification(&k, ram)?);
    let ls = extensions(&k, ext)?;
    let certs = ls.iter().map(|l| quaternion::admits_embedding(&k, &b, l)).collect::<lenspec::Result<Vec<_>>>()?;
    let all = certs.iter().all(|c| c.admits);
    let v = json!({
        "ramification": b.ramification().view(),
        "division": b.is_division(),
        "kleinian_admissible": quaternion::is_kleinian_admissible(&k, &b),
        "certificates": certs,
        "all_embed": all,
    });
    emit(&with_schema(v), None)?;
    Ok(0)
}

fn volume_cmd(args: &VolumeArgs, exec: Exec) -> Outcome {
    let k = load_field(&args.field)?;
    let ram = ramification(&k, &args.ram)?;
    let zeta = volume::dedekind_zeta_2(&k, args.zeta_cutoff, args.precision, exec)?;
    let vol = volume::borel_volume(&k, &ram, &zeta)?;
    let v = json!({
        "field": k.canonical_polynomial(),
        "discriminant": k.discriminant().to_string(),
        "ramification": ram.view(),
        "volume": DecimalBall::from_interval(&vol.value, 30),
        "norm_factor": vol.norm_factor.to_string(),
        "zeta": zeta.view(30),
        "cutoff": zeta.cutoff,
        "tail_bound": format!("{:.3e}", zeta.epsilon.to_f64()),
        "precision": args.precision,
    });
    emit(&with_schema(v), None)?;
    Ok(0)
}

fn twins_construct(request: &Path, out: Option<&Path>, exec: Exec) -> Outcome {
    let req = TwinRequest::load(request)?;
    let report = pipeline::run(&req, exec)?;
    write_text(report.to_json(), out)?;
    Ok(0)
}

fn twins_verify(report: &Path, exec: Exec) -> Outcome {
    let v = pipeline::verify_report(&read(report)?, exec)?;
    emit(&serde_json::to_value(&v)?, None)?;
    Ok(if v.ok { 0 } else { EXIT_HYPOTHESIS })
}

fn manifold_check(path: &Path, ram: &RamArgs, n_max: u64, height: u64, exec: Exec) -> Outcome {
    let k = load_field(path)?;
    let b = QuaternionAlgebra::new(ramification(&k, ram)?);
    let report = quaternion::torsion_free_check(&k, &b, n_max, height, exec)?;
    let v = json!({ "ramification": b.ramification().view(), "torsion_free": report.torsion_free, "witnesses": report.rows, "cyclotomic": report.cyclotomic });
    emit(&with_schema(v), None)?;
    Ok(0)
}

fn dispatch(cli: &Cli, exec: Exec) -> Outcome {
    match &cli.command {
        Command::Field { cmd: FieldCmd::Inspect { field, primes_up_to } } => field_inspect(field, *primes_up_to),
        Command::Primes { cmd: PrimesCmd::Frobenius { field, ext, prime, height } } => {
            primes_frobenius(field, ext, prime.as_deref(), *height, exec)
        }
        Command::Gaps { cmd: GapsCmd::Search { field, ext, target, k, window, height, policy, avoid, out } } => {
            gaps_search(field, ext, target, *k, *window, *height, *policy, avoid, out.as_deref(), exec)
        }
        Command::Algebra { cmd: AlgebraCmd::EmbedCheck { field, ram, ext } } => embed_check(field, ram, ext),
        Command::Volume(args) => volume_cmd(args, exec),
        Command::Twins { cmd: TwinsCmd::Construct { request, out } } => twins_construct(request, out.as_deref(), exec),
        Command::Twins { cmd: TwinsCmd::Verify { report } } => twins_verify(report, exec),
        Command::Manifold { cmd: ManifoldCmd::Check { field, ram, n_max, height } } => {
            manifold_check(field, ram, *n_max, *height, exec)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NoTuplesFound(_)) => EXIT_NO_TUPLES,
        Some(
            Error::Validation(_)
            | Error::NotLoxodromic
            | Error::CompositumDegenerate { .. }
            | Error::NotOneComplexPlace(_)
            | Error::UncheckablePlace(_)
            | Error::RamFEmpty,
        ) => EXIT_HYPOTHESIS,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let result = match cli.threads {
        Some(n) => with_threads(n, || dispatch(&cli, exec)),
        None => dispatch(&cli, exec),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
