//! End-to-end construction of tuples of algebras sharing the requested
//! geodesic lengths, with volumes in a bounded window.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use crate::config::{parse_count, parse_list, KeyValues};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldDescriptor, FieldElement, NumberField, PrimeIdeal};
use crate::interval::DecimalBall;
use crate::quaternion::{
    admits_embedding, extend_ramification, is_kleinian_admissible, witness_table, CommensurabilityClass,
    EmbeddingCertificate, PrimeEntry, QuaternionAlgebra, RamificationSet, RamificationView, WitnessRow,
};
use crate::search::{
    compositum_height, enumerate_target_primes, find_bounded_gap_tuples, gap_statistics, matches_target,
    GapStatistics, OverlapPolicy, SearchSpec,
};
use crate::sieve::primes_up_to;
use crate::splitting::{
    compositum_degree_check, cyclotomic_quadratic_degrees, CompositumCheck, CyclotomicDegrees, FrobeniusVector,
    QuadraticExtension, CYCLOTOMIC_HEIGHT,
};
use crate::volume::{
    borel_volume, dedekind_zeta_2, trace_to_geodesic, GeodesicView, Volume, VolumeReport, VolumeView, ZetaValue,
    ZetaView, DEFAULT_PRECISION, DEFAULT_ZETA_CUTOFF,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_TUPLES: usize = 16;
pub const DEFAULT_TORSION_N_MAX: u64 = 60;
const REPORT_DIGITS: usize = 20;

const REQUEST_KEYS: &[&str] = &[
    "poly", "disc", "shape_*", "ram_real", "ram_primes", "ram_opaque", "trace", "radicand", "k", "window", "height",
    "policy", "manifold", "p0", "zeta_cutoff", "precision", "max_tuples", "torsion_n_max",
];

/// A quadratic extension as written in a request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionSpec {
    Trace(String),
    Radicand(String),
}

impl ExtensionSpec {
    /// `trace: <elem>` or `radicand: <elem>`.
    pub fn parse(text: &str) -> Result<Self> {
        let (k, v) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("extension {text:?} must be `trace: ...` or `radicand: ...`")))?;
        Self::from_pair(k.trim(), v.trim())
    }

    fn from_pair(key: &str, value: &str) -> Result<Self> {
        match key {
            "trace" => Ok(ExtensionSpec::Trace(value.to_string())),
            "radicand" => Ok(ExtensionSpec::Radicand(value.to_string())),
            other => Err(Error::Parse(format!("unknown extension kind {other:?}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ExtensionSpec::Trace(t) => format!("trace: {t}"),
            ExtensionSpec::Radicand(d) => format!("radicand: {d}"),
        }
    }

    /// The extension and, for a trace, the parsed trace.
    pub fn build(&self, k: &NumberField) -> Result<(QuadraticExtension, Option<FieldElement>)> {
        match self {
            ExtensionSpec::Trace(t) => {
                let t = FieldElement::parse(k, t)?;
                Ok((QuadraticExtension::from_trace(k, &t, self.label())?, Some(t)))
            }
            ExtensionSpec::Radicand(d) => {
                Ok((QuadraticExtension::new(k, FieldElement::parse(k, d)?, self.label())?, None))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwinRequest {
    pub field: FieldDescriptor,
    pub ram_real: Vec<usize>,
    pub ram_primes: Vec<String>,
    pub ram_opaque: Vec<String>,
    pub extensions: Vec<ExtensionSpec>,
    pub k: usize,
    pub window: u64,
    pub height: u64,
    pub policy: OverlapPolicy,
    pub manifold: bool,
    pub p0: Option<String>,
    pub zeta_cutoff: u64,
    pub precision: u32,
    pub max_tuples: usize,
    pub torsion_n_max: u64,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Parse(format!("{key}: cannot parse {v:?}")))
}

fn quote_list<T: ToString>(items: &[T], quoted: bool) -> String {
    let parts: Vec<String> =
        items.iter().map(|s| if quoted { format!("\"{}\"", s.to_string()) } else { s.to_string() }).collect();
    format!("[{}]", parts.join(", "))
}

impl TwinRequest {
    /// Parse a request with the field given inline (`poly:`, `disc:`, `shape_<p>:`).
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        kv.check_keys(REQUEST_KEYS)?;
        let field = FieldDescriptor::from_key_values(&kv)?;
        let list = |key: &str| -> Result<Vec<String>> { kv.get(key)?.map(parse_list).transpose().map(Option::unwrap_or_default) };
        let ram_real = list("ram_real")?.iter().map(|s| parse_num::<usize>("ram_real", s)).collect::<Result<_>>()?;
        let extensions = kv
            .entries()
            .filter(|(k, _, _)| *k == "trace" || *k == "radicand")
            .map(|(k, v, _)| ExtensionSpec::from_pair(k, v))
            .collect::<Result<Vec<_>>>()?;
        if extensions.is_empty() {
            return Err(Error::Parse("request needs at least one `trace:` or `radicand:` line".into()));
        }
        let k: usize = parse_num("k", kv.require("k")?)?;
        if k < 2 {
            return Err(Error::InvalidInput(format!("tuple size k = {k}, need k >= 2")));
        }
        let manifold = match kv.get("manifold")?.map(str::trim) {
            None | Some("false") | Some("no") => false,
            Some("true") | Some("yes") => true,
            Some(other) => return Err(Error::Parse(format!("manifold: expected true or false, got {other:?}"))),
        };
        let count = |key: &str, default: u64| -> Result<u64> { kv.get(key)?.map(parse_count).transpose().map(|v| v.unwrap_or(default)) };
        Ok(TwinRequest {
            field,
            ram_real,
            ram_primes: list("ram_primes")?,
            ram_opaque: list("ram_opaque")?,
            extensions,
            k,
            window: count("window", 0)?,
            height: parse_count(kv.require("height")?)?,
            policy: kv.get("policy")?.map(str::parse).transpose()?.unwrap_or(OverlapPolicy::Sliding),
            manifold,
            p0: kv.get("p0")?.map(|s| s.trim().trim_matches('"').to_string()),
            zeta_cutoff: count("zeta_cutoff", DEFAULT_ZETA_CUTOFF)?,
            precision: count("precision", DEFAULT_PRECISION as u64)? as u32,
            max_tuples: count("max_tuples", DEFAULT_MAX_TUPLES as u64)? as usize,
            torsion_n_max: count("torsion_n_max", DEFAULT_TORSION_N_MAX)?,
        })
    }

    /// Read a request file; a `field: <path>` line pulls in a field file
    /// relative to the request.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let mut merged = String::new();
        let mut rest = String::new();
        for line in text.lines() {
            match line.split('#').next().unwrap_or("").trim().strip_prefix("field:") {
                Some(f) => {
                    let fp = path.parent().unwrap_or(Path::new(".")).join(f.trim());
                    let ft = std::fs::read_to_string(&fp).map_err(|e| Error::InvalidInput(format!("{}: {e}", fp.display())))?;
                    merged.push_str(&ft);
                    merged.push('\n');
                }
                None => {
                    rest.push_str(line);
                    rest.push('\n');
                }
            }
        }
        merged.push_str(&rest);
        TwinRequest::parse(&merged)
    }

    /// Canonical text form; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        let mut out = self.field.to_text();
        out.push_str(&format!("ram_real: {}\n", quote_list(&self.ram_real, false)));
        out.push_str(&format!("ram_primes: {}\n", quote_list(&self.ram_primes, true)));
        out.push_str(&format!("ram_opaque: {}\n", quote_list(&self.ram_opaque, true)));
        for e in &self.extensions {
            out.push_str(&e.label());
            out.push('\n');
        }
        out.push_str(&format!("k: {}\nwindow: {}\nheight: {}\n", self.k, self.window, self.height));
        let policy = match self.policy {
            OverlapPolicy::Sliding => "sliding",
            OverlapPolicy::Disjoint => "disjoint",
        };
        out.push_str(&format!("policy: {policy}\nmanifold: {}\n", self.manifold));
        if let Some(p) = &self.p0 {
            out.push_str(&format!("p0: \"{p}\"\n"));
        }
        out.push_str(&format!(
            "zeta_cutoff: {}\nprecision: {}\nmax_tuples: {}\ntorsion_n_max: {}\n",
            self.zeta_cutoff, self.precision, self.max_tuples, self.torsion_n_max
        ));
        out
    }
}

/// A violated hypothesis, by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisFailure {
    pub name: &'static str,
    pub detail: String,
}

fn failures_error(failures: &[HypothesisFailure]) -> Error {
    let parts: Vec<String> = failures.iter().map(|f| format!("{}: {}", f.name, f.detail)).collect();
    Error::Validation(parts.join("; "))
}

/// A request whose base hypotheses have been checked.
#[derive(Debug, Clone)]
pub struct Context {
    pub request: TwinRequest,
    pub field: NumberField,
    pub base: QuaternionAlgebra,
    pub extensions: Vec<QuadraticExtension>,
    pub traces: Vec<Option<FieldElement>>,
    pub geodesics: Vec<Option<GeodesicView>>,
    pub compositum: CompositumCheck,
    pub base_embeddings: Vec<EmbeddingCertificate>,
}

impl Context {
    pub fn target(&self) -> FrobeniusVector {
        FrobeniusVector::all_inert(self.extensions.len())
    }
}

/// Check every hypothesis of the construction on the base data.
///
/// All violated hypotheses are collected into one `Validation` error.
pub fn validate_base(request: &TwinRequest, exec: Exec) -> Result<Context> {
    let field = NumberField::from_descriptor(&request.field)?;
    let opaque: Vec<&str> = request.ram_opaque.iter().map(String::as_str).collect();
    let primes: Vec<&str> = request.ram_primes.iter().map(String::as_str).collect();
    let ram = RamificationSet::from_spec(&field, &request.ram_real, &primes, &opaque)?;
    let base = QuaternionAlgebra::new(ram);
    let mut failures = Vec::new();

    let (r1, r2) = field.signature();
    if r2 != 1 {
        failures.push(HypothesisFailure { name: "NotOneComplexPlace", detail: format!("signature ({r1}, {r2})") });
    }
    for i in 0..r1 {
        if !base.ramification().real().contains(&i) {
            failures.push(HypothesisFailure { name: "RealPlaceUnramified", detail: format!("real place {i}") });
        }
    }

    let mut extensions = Vec::new();
    let mut traces = Vec::new();
    for spec in &request.extensions {
        if let ExtensionSpec::Trace(t) = spec {
            // t = +-2 is parabolic and gives no extension at all
            if FieldElement::parse(&field, t)?.trace_radicand(&field).is_zero() {
                failures.push(HypothesisFailure { name: "NotLoxodromic", detail: spec.label() });
                continue;
            }
        }
        match spec.build(&field) {
            Ok((l, t)) => {
                extensions.push(l);
                traces.push(t);
            }
            Err(Error::PossiblyTrivialExtension(d)) => failures.push(HypothesisFailure {
                name: "TrivialExtension",
                detail: format!("{}: radicand {d} has no inert prime", spec.label()),
            }),
            Err(e) => return Err(e),
        }
    }

    let mut geodesics = Vec::new();
    let built = request.extensions.iter().filter(|s| {
        !matches!(s, ExtensionSpec::Trace(t) if FieldElement::parse(&field, t).is_ok_and(|t| t.trace_radicand(&field).is_zero()))
    });
    for (spec, t) in built.zip(&traces) {
        let g = match t {
            Some(t) if r2 == 1 => match trace_to_geodesic(&field, t, request.precision) {
                Ok(g) => Some(g.view(REPORT_DIGITS)),
                Err(Error::NotLoxodromic) => {
                    failures.push(HypothesisFailure { name: "NotLoxodromic", detail: spec.label() });
                    None
                }
                Err(e) => return Err(e),
            },
            _ => None,
        };
        geodesics.push(g);
    }

    let mut base_embeddings = Vec::new();
    for l in &extensions {
        match admits_embedding(&field, &base, l) {
            Ok(c) => {
                if !c.admits {
                    let split: Vec<&str> = c.places.iter().filter(|s| s.symbol.to_string() == "split").map(|s| s.place.as_str()).collect();
                    failures.push(HypothesisFailure {
                        name: "EmbeddingObstructed",
                        detail: format!("{} splits at {}", l.label(), split.join(", ")),
                    });
                }
                base_embeddings.push(c);
            }
            Err(Error::UncheckablePlace(p)) => {
                failures.push(HypothesisFailure { name: "UncheckablePlace", detail: format!("{} at opaque {p}", l.label()) })
            }
            Err(e) => return Err(e),
        }
    }

    let compositum = if extensions.is_empty() {
        CompositumCheck { subgroup: vec![], full: false, primes_sampled: 0 }
    } else {
        compositum_degree_check(&field, &extensions, compositum_height(request.height), exec)?
    };
    if extensions.len() == request.extensions.len() && !compositum.full {
        failures.push(HypothesisFailure {
            name: "CompositumDegenerate",
            detail: format!("observed subgroup of order {}, expected {}", compositum.subgroup.len(), 1u64 << extensions.len()),
        });
    }

    if !failures.is_empty() {
        return Err(failures_error(&failures));
    }
    debug_assert!(is_kleinian_admissible(&field, &base).admissible);
    Ok(Context { request: request.clone(), field, base, extensions, traces, geodesics, compositum, base_embeddings })
}

/// The prime `P0`: all-inert Frobenius, outside `Ram_f(B)`.
///
/// Without an override, the least-norm degree-1 such prime (ties broken by label).
pub fn choose_p0(
    k: &NumberField,
    ram: &RamificationSet,
    ls: &[QuadraticExtension],
    height: u64,
    override_label: Option<&str>,
) -> Result<PrimeIdeal> {
    let target = FrobeniusVector::all_inert(ls.len());
    let denominator = |p: u64| ls.iter().any(|l| (l.radicand().denominator() % p) == 0u32.into());
    if let Some(label) = override_label {
        let reject = |why: String| Error::Validation(format!("P0Rejected: {label} {why}"));
        let p = k.prime_from_label(label).map_err(|e| reject(e.to_string()))?;
        if ram.contains_prime(&p) {
            return Err(reject("is already ramified in the base algebra".into()));
        }
        if denominator(p.prime()) {
            return Err(reject("divides a radicand denominator".into()));
        }
        if matches_target(k, &p, ls, target)? != Some(true) {
            return Err(reject("is not inert in every extension".into()));
        }
        return Ok(p);
    }
    for p in primes_up_to(height) {
        if k.is_excluded(p) || denominator(p) {
            continue;
        }
        for prime in k.factor_prime(p)?.into_iter().filter(|q| q.inertia_degree() == 1) {
            if !ram.contains_prime(&prime) && matches_target(k, &prime, ls, target)? == Some(true) {
                return Ok(prime);
            }
        }
    }
    Err(Error::NoneBelowHeight(height))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    /// `[P0, P_i]`.
    pub added: Vec<String>,
    pub ramification: RamificationView,
    pub embeddings: Vec<EmbeddingCertificate>,
    pub volume: VolumeView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<WitnessRow>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleReport {
    pub primes: Vec<PrimeEntry>,
    pub norms: Vec<u64>,
    pub norm_span: u64,
    pub algebras: Vec<AlgebraReport>,
    /// Exact `max - min` of `prod (N(P) - 1)` over the tuple's algebras.
    pub volume_span_factor: String,
    pub volume_span: DecimalBall,
    /// Ramification sets are pairwise distinct, so the algebras are pairwise
    /// non-isomorphic and the classes pairwise different.
    pub pairwise_distinct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedTuple {
    pub primes: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub label: String,
    pub radicand: String,
    pub inert_witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub polynomial: String,
    pub discriminant: String,
    pub signature: (usize, usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseReport {
    pub ramification: RamificationView,
    pub embeddings: Vec<EmbeddingCertificate>,
    pub volume: VolumeView,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    /// Target primes below the height; each yields one candidate algebra.
    pub qualifying_algebras: usize,
    pub candidate_tuples: usize,
    pub statistics: GapStatistics,
    pub compositum: CompositumCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cyclotomic: Option<CyclotomicDegrees>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwinReport {
    pub schema_version: u32,
    /// Canonical request text; enough to re-derive the whole report.
    pub request: String,
    pub field: FieldReport,
    pub extensions: Vec<ExtensionReport>,
    pub base: BaseReport,
    pub zeta: ZetaView,
    pub p0: PrimeEntry,
    pub tuples: Vec<TupleReport>,
    pub skipped: Vec<SkippedTuple>,
    pub diagnostics: Diagnostics,
}

impl TwinReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

const HYPOTHESIS_NOTE: &str = "the count of qualifying algebras is finite-height evidence only; \
     unbounded growth with the volume is assumed, not verified";

/// Build and certify the algebras for one tuple. `Ok(Err(reason))` means the tuple is skipped.
pub fn certify_tuple(
    ctx: &Context,
    p0: &PrimeIdeal,
    primes: &[PrimeIdeal],
    base_volume: &Volume,
    zeta: &ZetaValue,
    cyclotomic: Option<&CyclotomicDegrees>,
) -> Result<std::result::Result<TupleReport, String>> {
    let k = &ctx.field;
    let mut algebras = Vec::new();
    let mut volumes = Vec::new();
    let mut labels = BTreeSet::new();
    for pi in primes {
        let b = extend_ramification(&ctx.base, p0, pi)?;
        let mut embeddings = Vec::new();
        for l in &ctx.extensions {
            let c = admits_embedding(k, &b, l)?;
            if !c.admits {
                return Err(Error::Validation(format!("EmbeddingLost: {} does not embed after adding {}", l.label(), pi.label())));
            }
            embeddings.push(c);
        }
        let torsion = match cyclotomic {
            Some(cyc) => {
                let t = witness_table(&b, cyc.clone());
                if !t.torsion_free {
                    let failed: Vec<String> = t.rows.iter().filter(|r| r.witness.is_none()).map(|r| r.n.to_string()).collect();
                    return Ok(Err(format!("algebra adding {} has no splitting witness for n = {}", pi.label(), failed.join(", "))));
                }
                Some(t.rows)
            }
            None => None,
        };
        let v = borel_volume(k, b.ramification(), zeta)?;
        labels.insert(CommensurabilityClass::new(k, &b).ramification);
        algebras.push(AlgebraReport {
            added: vec![p0.label(), pi.label()],
            ramification: b.ramification().view(),
            embeddings,
            volume: v.view(REPORT_DIGITS),
            torsion,
        });
        volumes.push(v);
    }
    let norms: Vec<u64> = primes.iter().map(|p| p.norm_u64().expect("degree-1 prime")).collect();
    let norm_span = norms.iter().max().unwrap() - norms.iter().min().unwrap();
    let vr = VolumeReport::new(base_volume.clone(), volumes);
    Ok(Ok(TupleReport {
        primes: primes.iter().map(PrimeEntry::from).collect(),
        norms,
        norm_span,
        algebras,
        volume_span_factor: vr.span_factor.to_string(),
        volume_span: DecimalBall::from_interval(&vr.span, REPORT_DIGITS),
        pairwise_distinct: labels.len() == primes.len(),
    }))
}

/// Run the whole construction on a validated context.
pub fn construct_twins(ctx: &Context, exec: Exec) -> Result<TwinReport> {
    let req = &ctx.request;
    let k = &ctx.field;
    let p0 = choose_p0(k, ctx.base.ramification(), &ctx.extensions, req.height, req.p0.as_deref())?;

    let mut spec = SearchSpec::new(ctx.extensions.clone(), ctx.target(), req.height, req.k, req.window);
    spec.policy = req.policy;
    spec.avoid = ctx.base.ramification().finite().iter().map(|p| p.label()).collect();
    spec.avoid.insert(p0.label());
    let stream = enumerate_target_primes(k, &spec, exec)?;
    let candidates = find_bounded_gap_tuples(&stream, &spec);
    let statistics = gap_statistics(k, &stream, &spec);

    let zeta = dedekind_zeta_2(k, req.zeta_cutoff, req.precision, exec)?;
    let base_volume = borel_volume(k, ctx.base.ramification(), &zeta)?;
    let cyclotomic = if req.manifold {
        Some(cyclotomic_quadratic_degrees(k, req.torsion_n_max, CYCLOTOMIC_HEIGHT, exec)?)
    } else {
        None
    };

    let mut tuples = Vec::new();
    let mut skipped = Vec::new();
    for t in &candidates {
        if tuples.len() >= req.max_tuples {
            break;
        }
        match certify_tuple(ctx, &p0, &t.primes, &base_volume, &zeta, cyclotomic.as_ref())? {
            Ok(r) => {
                check_tuple_invariants(ctx, &p0, &base_volume, &r).map_err(|e| Error::Validation(format!("InvariantViolated: {e}")))?;
                tuples.push(r);
            }
            Err(reason) => skipped.push(SkippedTuple { primes: t.primes.iter().map(|p| p.label()).collect(), reason }),
        }
    }
    if tuples.is_empty() {
        let mut msg = format!(
            "{} candidate tuples from {} target primes at height {} with window {}; try a larger height or window",
            candidates.len(),
            stream.len(),
            req.height,
            req.window
        );
        for s in skipped.iter().take(5) {
            msg.push_str(&format!("; skipped [{}]: {}", s.primes.join(", "), s.reason));
        }
        if skipped.len() > 5 {
            msg.push_str(&format!("; ... {} more skipped", skipped.len() - 5));
        }
        return Err(Error::NoTuplesFound(msg));
    }

    Ok(TwinReport {
        schema_version: SCHEMA_VERSION,
        request: req.to_text(),
        field: FieldReport {
            polynomial: k.canonical_polynomial(),
            discriminant: k.discriminant().to_string(),
            signature: k.signature(),
        },
        extensions: extension_reports(ctx),
        base: BaseReport {
            ramification: ctx.base.ramification().view(),
            embeddings: ctx.base_embeddings.clone(),
            volume: base_volume.view(REPORT_DIGITS),
        },
        zeta: zeta.view(REPORT_DIGITS),
        p0: PrimeEntry::from(&p0),
        tuples,
        skipped,
        diagnostics: Diagnostics {
            qualifying_algebras: stream.len(),
            candidate_tuples: candidates.len(),
            statistics,
            compositum: ctx.compositum.clone(),
            cyclotomic,
            note: HYPOTHESIS_NOTE.into(),
        },
    })
}

fn extension_reports(ctx: &Context) -> Vec<ExtensionReport> {
    ctx.extensions
        .iter()
        .zip(&ctx.geodesics)
        .map(|(l, g)| ExtensionReport {
            label: l.label().to_string(),
            radicand: l.radicand().to_string(),
            inert_witness: l.inert_witness().label(),
            geodesic: g.clone(),
        })
        .collect()
}

/// Invariants every tuple must satisfy; `Err` names the first violation.
fn check_tuple_invariants(ctx: &Context, p0: &PrimeIdeal, base: &Volume, t: &TupleReport) -> std::result::Result<(), String> {
    let req = &ctx.request;
    if !t.pairwise_distinct {
        return Err("ramification sets not pairwise distinct".into());
    }
    let base_card = ctx.base.ramification().cardinality();
    for a in &t.algebras {
        if a.embeddings.len() != ctx.extensions.len() || a.embeddings.iter().any(|c| !c.admits) {
            return Err(format!("missing or failed embedding certificate for {:?}", a.added));
        }
        let card = a.ramification.ram_real.len() + a.ramification.ram_primes.len() + a.ramification.ram_opaque.len();
        if card != base_card + 2 || card % 2 == 1 {
            return Err(format!("ramification of {:?} has cardinality {card}", a.added));
        }
        if a.ramification.ram_primes.is_empty() {
            return Err(format!("Ram_f empty for {:?}", a.added));
        }
    }
    if t.norm_span > req.window {
        return Err(format!("norm span {} exceeds window {}", t.norm_span, req.window));
    }
    // volume span <= base * (N(P0) - 1) * C, on the exact norm factors
    let span: BigUint = t.volume_span_factor.parse().map_err(|_| "bad span factor".to_string())?;
    let bound = &base.norm_factor * (p0.norm() - 1u32) * BigUint::from(req.window);
    if span > bound {
        return Err(format!("volume span factor {span} exceeds {bound}"));
    }
    Ok(())
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub ok: bool,
    pub checks: Vec<VerifyCheck>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> VerifyCheck {
    VerifyCheck { name: name.into(), passed, detail: if passed { String::new() } else { detail.into() } }
}

fn same_json<T: Serialize>(value: &T, stored: Option<&Value>) -> bool {
    stored.is_some_and(|s| serde_json::to_value(value).ok().as_ref() == Some(s))
}

/// Re-derive every certificate of a report from its request text.
pub fn verify_report(json: &str, exec: Exec) -> Result<VerifyReport> {
    let report: Value = serde_json::from_str(json).map_err(|e| Error::Parse(format!("report JSON: {e}")))?;
    let mut checks = Vec::new();
    let version = report.get("schema_version").and_then(Value::as_u64);
    checks.push(check("schema_version", version == Some(SCHEMA_VERSION as u64), format!("found {version:?}")));
    let text = report.get("request").and_then(Value::as_str).ok_or_else(|| Error::Parse("report has no request".into()))?;
    let request = TwinRequest::parse(text)?;
    let ctx = match validate_base(&request, exec) {
        Ok(c) => {
            checks.push(check("base hypotheses", true, ""));
            c
        }
        Err(e) => {
            checks.push(check("base hypotheses", false, e.to_string()));
            return Ok(VerifyReport { schema_version: SCHEMA_VERSION, ok: false, checks });
        }
    };
    let k = &ctx.field;
    checks.push(check("extensions", same_json(&extension_reports(&ctx), report.get("extensions")), "extension data differ"));
    checks.push(check("base embeddings", same_json(&ctx.base_embeddings, report.pointer("/base/embeddings")), "differ"));

    let p0_label = report.pointer("/p0/label").and_then(Value::as_str).unwrap_or_default().to_string();
    let p0 = match choose_p0(k, ctx.base.ramification(), &ctx.extensions, request.height, Some(&p0_label)) {
        Ok(p) => p,
        Err(e) => {
            checks.push(check("p0", false, e.to_string()));
            return Ok(VerifyReport { schema_version: SCHEMA_VERSION, ok: false, checks });
        }
    };
    let p0_ok = same_json(&PrimeEntry::from(&p0), report.get("p0"));
    let minimal = request.p0.is_some()
        || choose_p0(k, ctx.base.ramification(), &ctx.extensions, request.height, None).is_ok_and(|q| q == p0);
    checks.push(check("p0", p0_ok && minimal, format!("{p0_label} is not the expected P0")));

    let zeta = dedekind_zeta_2(k, request.zeta_cutoff, request.precision, exec)?;
    let base_volume = borel_volume(k, ctx.base.ramification(), &zeta)?;
    checks.push(check("zeta", same_json(&zeta.view(REPORT_DIGITS), report.get("zeta")), "zeta value differs"));
    checks.push(check("base volume", same_json(&base_volume.view(REPORT_DIGITS), report.pointer("/base/volume")), "differs"));
    let cyclotomic = if request.manifold {
        Some(cyclotomic_quadratic_degrees(k, request.torsion_n_max, CYCLOTOMIC_HEIGHT, exec)?)
    } else {
        None
    };

    let tuples = report.get("tuples").and_then(Value::as_array).cloned().unwrap_or_default();
    checks.push(check("tuples present", !tuples.is_empty(), "report has no tuples"));
    let mut avoid: BTreeSet<String> = ctx.base.ramification().finite().iter().map(|p| p.label()).collect();
    avoid.insert(p0.label());
    let mut seen = BTreeSet::new();
    for (i, stored) in tuples.iter().enumerate() {
        let name = format!("tuple {i}");
        let labels: Vec<String> = stored
            .get("primes")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|p| p.get("label").and_then(Value::as_str).map(String::from)).collect())
            .unwrap_or_default();
        if labels.len() != request.k {
            checks.push(check(name, false, format!("{} primes, expected {}", labels.len(), request.k)));
            continue;
        }
        let primes = match labels.iter().map(|l| k.prime_from_label(l)).collect::<Result<Vec<_>>>() {
            Ok(p) => p,
            Err(e) => {
                checks.push(check(name, false, e.to_string()));
                continue;
            }
        };
        let mut targets = true;
        for p in &primes {
            targets &= p.inertia_degree() == 1
                && !avoid.contains(&p.label())
                && matches_target(k, p, &ctx.extensions, ctx.target())? == Some(true);
        }
        checks.push(check(format!("{name} frobenius"), targets, "a prime is not an admissible target prime"));
        match certify_tuple(&ctx, &p0, &primes, &base_volume, &zeta, cyclotomic.as_ref())? {
            Ok(t) => {
                checks.push(check(format!("{name} certificates"), same_json(&t, Some(stored)), "re-derived tuple differs"));
                let inv = check_tuple_invariants(&ctx, &p0, &base_volume, &t);
                checks.push(check(format!("{name} invariants"), inv.is_ok(), inv.err().unwrap_or_default()));
            }
            Err(reason) => checks.push(check(format!("{name} certificates"), false, reason)),
        }
        checks.push(check(format!("{name} distinct"), seen.insert(labels.clone()), "tuple repeated"));
    }
    let ok = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { schema_version: SCHEMA_VERSION, ok, checks })
}

/// Validate, construct, and return the report.
pub fn run(request: &TwinRequest, exec: Exec) -> Result<TwinReport> {
    let ctx = validate_base(request, exec)?;
    construct_twins(&ctx, exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = "\
poly: x^3 - 2
disc: -108
ram_real: [0]
ram_primes: [\"5:0\"]
trace: a
k: 2
window: 30
height: 2000
zeta_cutoff: 1000
precision: 64
max_tuples: 3
";

    #[test]
    fn request_round_trip() {
        let r = TwinRequest::parse(CUBIC).unwrap();
        assert_eq!(r.extensions, vec![ExtensionSpec::Trace("a".into())]);
        assert_eq!(r.ram_primes, vec!["5:0".to_string()]);
        assert_eq!(TwinRequest::parse(&r.to_text()).unwrap(), r);
        assert!(TwinRequest::parse(&CUBIC.replace("k: 2", "k: 1")).is_err());
        assert!(TwinRequest::parse(&format!("{CUBIC}bogus: 1\n")).is_err());
    }

    #[test]
    fn validates_cubic_base() {
        let ctx = validate_base(&TwinRequest::parse(CUBIC).unwrap(), Exec::Sequential).unwrap();
        assert!(ctx.base_embeddings[0].admits);
        assert!(ctx.geodesics[0].is_some());
    }

    #[test]
    fn named_failures() {
        let unram = CUBIC.replace("ram_real: [0]\nram_primes: [\"5:0\"]", "ram_primes: [\"5:0\", \"11:0\"]");
        let e = validate_base(&TwinRequest::parse(&unram).unwrap(), Exec::Sequential).unwrap_err();
        assert!(e.to_string().contains("RealPlaceUnramified"), "{e}");
        let dup = CUBIC.replace("trace: a", "radicand: 5\nradicand: 5");
        let e = validate_base(&TwinRequest::parse(&dup).unwrap(), Exec::Sequential).unwrap_err();
        assert!(e.to_string().contains("CompositumDegenerate"), "{e}");
        for t in ["trace: 2", "trace: 1"] {
            let e = validate_base(&TwinRequest::parse(&CUBIC.replace("trace: a", t)).unwrap(), Exec::Sequential).unwrap_err();
            assert!(e.to_string().contains("NotLoxodromic"), "{e}");
        }
    }

    #[test]
    fn p0_choice() {
        let q = NumberField::rationals();
        let sqrt5 = QuadraticExtension::new(&q, FieldElement::from_int(5), "sqrt5").unwrap();
        let empty = RamificationSet::new(&q, vec![], vec![], vec![]).unwrap();
        let ls = [sqrt5];
        assert_eq!(choose_p0(&q, &empty, &ls, 100, None).unwrap().prime(), 3);
        assert_eq!(choose_p0(&q, &empty, &ls, 100, Some("7:0")).unwrap().prime(), 7);
        assert!(matches!(choose_p0(&q, &empty, &ls, 100, Some("11:0")), Err(Error::Validation(_))));
        assert_eq!(choose_p0(&q, &empty, &ls, 2, None), Err(Error::NoneBelowHeight(2)));
    }

    #[test]
    fn cubic_twins_verify() {
        let report = run(&TwinRequest::parse(CUBIC).unwrap(), Exec::Sequential).unwrap();
        assert!(!report.tuples.is_empty());
        let t = &report.tuples[0];
        let f: Vec<u64> = t.algebras.iter().map(|a| a.volume.norm_factor.parse().unwrap()).collect();
        let p0 = report.p0.norm.parse::<u64>().unwrap();
        let base: u64 = report.base.volume.norm_factor.parse().unwrap();
        assert_eq!(f[0], base * (p0 - 1) * (t.norms[0] - 1));
        assert_eq!(f[1], base * (p0 - 1) * (t.norms[1] - 1));
        let json = report.to_json();
        let v = verify_report(&json, Exec::Sequential).unwrap();
        assert!(v.ok, "{:?}", v.checks);
        let again = run(&TwinRequest::parse(CUBIC).unwrap(), Exec::Parallel).unwrap().to_json();
        assert_eq!(json, again);
    }

    #[test]
    fn zero_window_finds_nothing() {
        let r = TwinRequest::parse(&CUBIC.replace("window: 30", "window: 0")).unwrap();
        assert!(matches!(run(&r, Exec::Sequential), Err(Error::NoTuplesFound(_))));
    }

    #[test]
    fn tampered_report_fails() {
        let report = run(&TwinRequest::parse(CUBIC).unwrap(), Exec::Sequential).unwrap();
        let mut v: Value = serde_json::from_str(&report.to_json()).unwrap();
        v["tuples"][0]["algebras"][0]["volume"]["norm_factor"] = Value::String("1".into());
        let out = verify_report(&v.to_string(), Exec::Sequential).unwrap();
        assert!(!out.ok);
    }
}
