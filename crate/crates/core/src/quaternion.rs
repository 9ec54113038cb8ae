//! Quaternion algebras over `K`, described by their ramification sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{NumberField, PrimeIdeal};
use crate::splitting::{
    cyclotomic_quadratic_degrees, split_symbol, split_symbol_real, CyclotomicDegrees, QuadraticExtension, SplitSymbol,
};

/// A ramified prime the library cannot compute with (e.g. above an excluded
/// prime), written `label` or `label@norm`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpaquePrime {
    pub label: String,
    pub norm: Option<u64>,
}

impl OpaquePrime {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (label, norm) = match text.split_once('@') {
            Some((l, n)) => {
                let n: u64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad declared norm in {text:?}")))?;
                if n < 2 {
                    return Err(Error::Parse(format!("declared norm in {text:?} must be at least 2")));
                }
                (l.trim(), Some(n))
            }
            None => (text, None),
        };
        if label.is_empty() {
            return Err(Error::Parse("empty opaque label".into()));
        }
        Ok(OpaquePrime { label: label.to_string(), norm })
    }
}

impl fmt::Display for OpaquePrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.norm {
            Some(n) => write!(f, "{}@{}", self.label, n),
            None => f.write_str(&self.label),
        }
    }
}

/// The places where a quaternion algebra ramifies. Always of even cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationSet {
    real: BTreeSet<usize>,
    finite: BTreeSet<PrimeIdeal>,
    opaque: BTreeSet<OpaquePrime>,
}

impl RamificationSet {
    pub fn new(k: &NumberField, real: Vec<usize>, finite: Vec<PrimeIdeal>, opaque: Vec<OpaquePrime>) -> Result<Self> {
        let r1 = k.signature().0;
        let n = real.len() + finite.len() + opaque.len();
        let real_set: BTreeSet<usize> = real.into_iter().collect();
        if let Some(&i) = real_set.iter().find(|&&i| i >= r1) {
            return Err(Error::InvalidInput(format!("real place {i} does not exist (r1 = {r1})")));
        }
        let finite_set: BTreeSet<PrimeIdeal> = finite.into_iter().collect();
        let opaque_labels: BTreeSet<&str> = opaque.iter().map(|o| o.label.as_str()).collect();
        if opaque_labels.len() != opaque.len() {
            return Err(Error::InvalidInput("duplicate opaque ramification label".into()));
        }
        let opaque_set: BTreeSet<OpaquePrime> = opaque.into_iter().collect();
        if real_set.len() + finite_set.len() + opaque_set.len() != n {
            return Err(Error::InvalidInput("duplicate place in ramification set".into()));
        }
        let set = RamificationSet { real: real_set, finite: finite_set, opaque: opaque_set };
        set.check_parity()?;
        Ok(set)
    }

    /// Parse the config form: real indices, `"p:index"` labels, opaque labels.
    pub fn from_spec(k: &NumberField, real: &[usize], primes: &[&str], opaque: &[&str]) -> Result<Self> {
        let finite = primes.iter().map(|l| k.prime_from_label(l)).collect::<Result<Vec<_>>>()?;
        let opaque = opaque.iter().map(|o| OpaquePrime::parse(o)).collect::<Result<Vec<_>>>()?;
        RamificationSet::new(k, real.to_vec(), finite, opaque)
    }

    fn check_parity(&self) -> Result<()> {
        let n = self.cardinality();
        if n % 2 == 1 {
            return Err(Error::OddRamification(n));
        }
        Ok(())
    }

    pub fn cardinality(&self) -> usize {
        self.real.len() + self.finite.len() + self.opaque.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == 0
    }

    pub fn real(&self) -> &BTreeSet<usize> {
        &self.real
    }

    pub fn finite(&self) -> &BTreeSet<PrimeIdeal> {
        &self.finite
    }

    pub fn opaque(&self) -> &BTreeSet<OpaquePrime> {
        &self.opaque
    }

    /// Ram_f: computable finite primes plus opaque labels.
    pub fn finite_count(&self) -> usize {
        self.finite.len() + self.opaque.len()
    }

    pub fn contains_prime(&self, p: &PrimeIdeal) -> bool {
        self.finite.contains(p)
    }

    /// Every place as a string label: `real:i`, `p:index`, `opaque:label`.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        out.extend(self.real.iter().map(|i| format!("real:{i}")));
        out.extend(self.finite.iter().map(|p| p.label()));
        out.extend(self.opaque.iter().map(|o| format!("opaque:{}", o.label)));
        out
    }

    pub fn view(&self) -> RamificationView {
        RamificationView {
            ram_real: self.real.iter().copied().collect(),
            ram_primes: self.finite.iter().map(PrimeEntry::from).collect(),
            ram_opaque: self.opaque.iter().map(|o| o.to_string()).collect(),
        }
    }
}

/// JSON form of a prime ideal with its norm and local factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeEntry {
    pub label: String,
    pub norm: String,
    pub factor: String,
}

impl From<&PrimeIdeal> for PrimeEntry {
    fn from(p: &PrimeIdeal) -> Self {
        PrimeEntry { label: p.label(), norm: p.norm().to_string(), factor: p.factor().to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationView {
    pub ram_real: Vec<usize>,
    pub ram_primes: Vec<PrimeEntry>,
    pub ram_opaque: Vec<String>,
}

/// A quaternion algebra over `K`, determined up to isomorphism by its ramification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    ram: RamificationSet,
}

impl QuaternionAlgebra {
    pub fn new(ram: RamificationSet) -> Self {
        QuaternionAlgebra { ram }
    }

    pub fn ramification(&self) -> &RamificationSet {
        &self.ram
    }

    /// Ramified somewhere.
    pub fn is_division(&self) -> bool {
        !self.ram.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reasons: Vec<String>,
}

/// One complex place and every real place ramified.
pub fn is_kleinian_admissible(k: &NumberField, b: &QuaternionAlgebra) -> Admissibility {
    let (r1, r2) = k.signature();
    let mut reasons = Vec::new();
    if r2 != 1 {
        reasons.push(format!("field has {r2} complex places, need exactly 1"));
    }
    for i in 0..r1 {
        if !b.ram.real.contains(&i) {
            reasons.push(format!("real place {i} unramified"));
        }
    }
    Admissibility { admissible: reasons.is_empty(), reasons }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceSymbol {
    pub place: String,
    pub symbol: SplitSymbol,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    pub extension: String,
    pub admits: bool,
    pub places: Vec<PlaceSymbol>,
}

/// `L` embeds in `B` iff no ramified place of `B` splits in `L`.
pub fn admits_embedding(k: &NumberField, b: &QuaternionAlgebra, l: &QuadraticExtension) -> Result<EmbeddingCertificate> {
    if let Some(o) = b.ram.opaque.iter().next() {
        return Err(Error::UncheckablePlace(o.label.clone()));
    }
    let mut places = Vec::new();
    for &i in &b.ram.real {
        places.push(PlaceSymbol { place: format!("real:{i}"), symbol: split_symbol_real(k, i, l)? });
    }
    for p in &b.ram.finite {
        places.push(PlaceSymbol { place: p.label(), symbol: split_symbol(k, p, l)? });
    }
    let admits = places.iter().all(|s| s.symbol != SplitSymbol::Split);
    Ok(EmbeddingCertificate { extension: l.label().to_string(), admits, places })
}

/// The algebra with `Ram(B) ∪ {P0, Pi}`.
pub fn extend_ramification(b: &QuaternionAlgebra, p0: &PrimeIdeal, pi: &PrimeIdeal) -> Result<QuaternionAlgebra> {
    if p0 == pi {
        return Err(Error::SamePrime(p0.label()));
    }
    for p in [p0, pi] {
        if b.ram.finite.contains(p) {
            return Err(Error::AlreadyRamified(p.label()));
        }
    }
    let mut ram = b.ram.clone();
    ram.finite.insert(p0.clone());
    ram.finite.insert(pi.clone());
    ram.check_parity()?;
    debug_assert_eq!(ram.cardinality(), b.ram.cardinality() + 2);
    Ok(QuaternionAlgebra { ram })
}

/// Commensurability invariants: the field presentation and the ramification labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommensurabilityClass {
    pub polynomial: String,
    pub degree: usize,
    pub signature: (usize, usize),
    pub discriminant: String,
    pub ramification: BTreeSet<String>,
}

impl CommensurabilityClass {
    pub fn new(k: &NumberField, b: &QuaternionAlgebra) -> Self {
        CommensurabilityClass {
            polynomial: k.canonical_polynomial(),
            degree: k.degree(),
            signature: k.signature(),
            discriminant: k.discriminant().to_string(),
            ramification: b.ram.labels(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassComparison {
    pub same: bool,
    pub warning: Option<String>,
}

/// Equal field presentation and equal ramification labels.
///
/// Fields are compared by defining polynomial; when two different
/// polynomials share degree, signature and discriminant the fields may be
/// isomorphic, and the comparison says so.
pub fn same_commensurability_class(a: &CommensurabilityClass, b: &CommensurabilityClass) -> ClassComparison {
    if a.polynomial != b.polynomial {
        let warning = (a.degree == b.degree && a.signature == b.signature && a.discriminant == b.discriminant).then(|| {
            format!(
                "fields {} and {} share degree, signature and discriminant and may be isomorphic; \
                 they are compared by presentation and treated as different",
                a.polynomial, b.polynomial
            )
        });
        if let Some(w) = &warning {
            eprintln!("warning: {w}");
        }
        return ClassComparison { same: false, warning };
    }
    ClassComparison { same: a.ramification == b.ramification, warning: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub n: u64,
    /// A ramified prime with norm `1 mod n`, or `None` (FAIL).
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionReport {
    pub torsion_free: bool,
    pub rows: Vec<WitnessRow>,
    pub cyclotomic: CyclotomicDegrees,
}

/// For each quadratic cyclotomic `K(zeta_n)`, look for a finite ramified
/// prime that splits there (`N(P) = 1 mod n`). Opaque labels are never witnesses.
pub fn torsion_free_check(k: &NumberField, b: &QuaternionAlgebra, n_max: u64, x: u64, exec: Exec) -> Result<TorsionReport> {
    if b.ram.finite_count() == 0 {
        return Err(Error::RamFEmpty);
    }
    let cyclotomic = cyclotomic_quadratic_degrees(k, n_max, x, exec)?;
    Ok(witness_table(b, cyclotomic))
}

pub fn witness_table(b: &QuaternionAlgebra, cyclotomic: CyclotomicDegrees) -> TorsionReport {
    let rows: Vec<WitnessRow> = cyclotomic
        .degrees
        .iter()
        .map(|&n| {
            let witness = b
                .ram
                .finite
                .iter()
                .find(|p| {
                    let r = &p.norm() % n;
                    num_integer::gcd(num_traits::ToPrimitive::to_u64(&r).unwrap(), n) == 1 && r == 1u32.into()
                })
                .map(|p| p.label());
            WitnessRow { n, witness }
        })
        .collect();
    TorsionReport { torsion_free: rows.iter().all(|r| r.witness.is_some()), rows, cyclotomic }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use crate::poly::IntPolynomial;

    fn field(s: &str) -> NumberField {
        NumberField::new(IntPolynomial::parse(s).unwrap(), None).unwrap()
    }

    fn deg1(k: &NumberField, p: u64) -> PrimeIdeal {
        k.factor_prime(p).unwrap().into_iter().find(|q| q.inertia_degree() == 1).unwrap()
    }

    #[test]
    fn admissibility() {
        let k = field("x^3 - x + 1");
        let p5 = deg1(&k, 5);
        let b = QuaternionAlgebra::new(RamificationSet::new(&k, vec![0], vec![p5.clone()], vec![]).unwrap());
        assert!(is_kleinian_admissible(&k, &b).admissible);
        let p7 = k.factor_prime(7).unwrap().remove(0);
        let c = QuaternionAlgebra::new(RamificationSet::new(&k, vec![], vec![p5, p7], vec![]).unwrap());
        let a = is_kleinian_admissible(&k, &c);
        assert!(!a.admissible);
        assert_eq!(a.reasons, vec!["real place 0 unramified".to_string()]);

        let g = field("x^2 + 1");
        let b = QuaternionAlgebra::new(RamificationSet::from_spec(&g, &[], &["3:0", "7:0"], &[]).unwrap());
        assert!(is_kleinian_admissible(&g, &b).admissible);
        assert!(b.is_division());
        let split = QuaternionAlgebra::new(RamificationSet::new(&g, vec![], vec![], vec![]).unwrap());
        assert!(!split.is_division());
    }

    #[test]
    fn parity_and_duplicates() {
        let g = field("x^2 + 1");
        assert_eq!(RamificationSet::from_spec(&g, &[], &["3:0"], &[]), Err(Error::OddRamification(1)));
        assert!(RamificationSet::from_spec(&g, &[], &["3:0", "3:0"], &[]).is_err());
        assert!(RamificationSet::from_spec(&g, &[0], &["3:0"], &[]).is_err());
        let r = RamificationSet::from_spec(&g, &[], &["3:0"], &["dyadic@2"]).unwrap();
        assert_eq!(r.cardinality(), 2);
    }

    #[test]
    fn embedding_examples() {
        let q = NumberField::rationals();
        let b = QuaternionAlgebra::new(RamificationSet::from_spec(&q, &[0], &["3:0"], &[]).unwrap());
        let sqrt5 = QuadraticExtension::new(&q, FieldElement::from_int(5), "sqrt5").unwrap();
        let cert = admits_embedding(&q, &b, &sqrt5).unwrap();
        assert!(!cert.admits);
        assert_eq!(cert.places[0], PlaceSymbol { place: "real:0".into(), symbol: SplitSymbol::Split });
        let i = QuadraticExtension::new(&q, FieldElement::from_int(-1), "i").unwrap();
        assert!(admits_embedding(&q, &b, &i).unwrap().admits);
        let empty = QuaternionAlgebra::new(RamificationSet::new(&q, vec![], vec![], vec![]).unwrap());
        assert!(admits_embedding(&q, &empty, &sqrt5).unwrap().admits);
        let opaque = QuaternionAlgebra::new(RamificationSet::from_spec(&q, &[0], &[], &["dyadic"]).unwrap());
        assert_eq!(admits_embedding(&q, &opaque, &i), Err(Error::UncheckablePlace("dyadic".into())));
    }

    #[test]
    fn extension_examples() {
        let k = field("x^3 - x + 1");
        let p5 = deg1(&k, 5);
        let b = QuaternionAlgebra::new(RamificationSet::new(&k, vec![0], vec![p5.clone()], vec![]).unwrap());
        let p7 = k.factor_prime(7).unwrap().remove(0);
        let p11 = k.factor_prime(11).unwrap().remove(0);
        let e = extend_ramification(&b, &p7, &p11).unwrap();
        assert_eq!(e.ramification().cardinality(), 4);
        assert_eq!(extend_ramification(&b, &p5, &p7), Err(Error::AlreadyRamified(p5.label())));
        assert_eq!(extend_ramification(&b, &p7, &p7), Err(Error::SamePrime(p7.label())));
        let g = field("x^2 + 1");
        let empty = QuaternionAlgebra::new(RamificationSet::new(&g, vec![], vec![], vec![]).unwrap());
        let p3 = g.factor_prime(3).unwrap().remove(0);
        let q7 = g.factor_prime(7).unwrap().remove(0);
        let e = extend_ramification(&empty, &p3, &q7).unwrap();
        assert_eq!(e.ramification().labels().into_iter().collect::<Vec<_>>(), vec!["3:0", "7:0"]);
    }

    #[test]
    fn commensurability() {
        let g = field("x^2 + 1");
        let h = field("x^2 + 4x + 5");
        let bg = QuaternionAlgebra::new(RamificationSet::from_spec(&g, &[], &["3:0", "7:0"], &[]).unwrap());
        let cg = CommensurabilityClass::new(&g, &bg);
        assert!(same_commensurability_class(&cg, &cg).same);
        let bg2 = QuaternionAlgebra::new(RamificationSet::from_spec(&g, &[], &["3:0", "11:0"], &[]).unwrap());
        assert!(!same_commensurability_class(&cg, &CommensurabilityClass::new(&g, &bg2)).same);
        let bh = QuaternionAlgebra::new(RamificationSet::from_spec(&h, &[], &["3:0", "7:0"], &[]).unwrap());
        let cmp = same_commensurability_class(&cg, &CommensurabilityClass::new(&h, &bh));
        assert!(!cmp.same);
        assert!(cmp.warning.is_some());
    }

    #[test]
    fn torsion_witnesses() {
        let k = field("x^3 - 2");
        let p5 = deg1(&k, 5);
        let b5 = QuaternionAlgebra::new(RamificationSet::new(&k, vec![0], vec![p5], vec![]).unwrap());
        let r = torsion_free_check(&k, &b5, 12, 10_000, Exec::Sequential).unwrap();
        assert!(!r.torsion_free);
        assert_eq!(r.rows[0], WitnessRow { n: 3, witness: None });
        let empty = QuaternionAlgebra::new(RamificationSet::new(&k, vec![], vec![], vec![]).unwrap());
        assert_eq!(torsion_free_check(&k, &empty, 12, 1000, Exec::Sequential).err(), Some(Error::RamFEmpty));
    }
}
