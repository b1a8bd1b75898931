//! Ramified-prime torsion classes in specialized fibers, their certified
//! orders, and parameter scans.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::integer::{divisors, exact_root};
use crate::arith::{FactorEffort, IntFactorization, Poly};
use crate::class_group::{
    class_group_generic, class_group_of_quadratic_field, Certification, ClassGroup, RelationConfig,
};
use crate::curve::{
    genus, good_parameter, normalize_integral_model, witness_primes, SuperellipticCurve, Verdict,
};
use crate::error::{Error, Result};
use crate::field::{minkowski_bound, NumberField};
use crate::ideal::{is_principal, FracIdeal, Principality, PrincipalityResult};
use crate::serial::{big, big_matrix, big_opt, big_vec};
use crate::specialization::specialize;

/// The classes `[(q, theta)]` for primes `q || value`, `q` prime to `m`,
/// where `theta^m = value` generates `k`. Sorted by `q`.
pub fn candidate_torsion_classes(
    k: &Arc<NumberField>,
    fac: &IntFactorization,
    m: u32,
) -> Result<Vec<(BigInt, FracIdeal)>> {
    let theta = k.theta_power(1);
    witness_primes(fac, m)
        .into_iter()
        .map(|q| {
            let mut qe = k.one();
            for c in qe.iter_mut() {
                *c *= &q;
            }
            let ideal = FracIdeal::from_integral_generators(k, &[qe, theta.clone()])?;
            Ok((q, ideal))
        })
        .collect()
}

/// Exact order or the set of divisors of `m` still possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProvenOrder {
    Exact(u64),
    Candidates(Vec<u64>),
}

impl ProvenOrder {
    fn from_set(set: Vec<u64>) -> Self {
        if set.len() == 1 {
            ProvenOrder::Exact(set[0])
        } else {
            ProvenOrder::Candidates(set)
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            ProvenOrder::Exact(d) => Some(*d),
            ProvenOrder::Candidates(_) => None,
        }
    }

    pub fn candidates(&self) -> Vec<u64> {
        match self {
            ProvenOrder::Exact(d) => vec![*d],
            ProvenOrder::Candidates(c) => c.clone(),
        }
    }

    /// Exact order above one.
    pub fn is_nontrivial(&self) -> bool {
        matches!(self, ProvenOrder::Exact(d) if *d > 1)
    }
}

/// `2`, or `1|5` for an undecided set.
impl fmt::Display for ProvenOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.candidates().iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl FromStr for ProvenOrder {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut set = s
            .split('|')
            .map(|p| p.trim().parse::<u64>().map_err(|_| format!("bad order {:?}", s)))
            .collect::<std::result::Result<Vec<u64>, String>>()?;
        if set.is_empty() || set.contains(&0) {
            return Err(format!("bad order {:?}", s));
        }
        set.sort_unstable();
        set.dedup();
        Ok(ProvenOrder::from_set(set))
    }
}

impl Serialize for ProvenOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProvenOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderStep {
    pub d: u64,
    #[serde(flatten)]
    pub result: PrincipalityResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRecord {
    #[serde(with = "big_matrix")]
    pub hnf: Vec<Vec<BigInt>>,
    #[serde(with = "big")]
    pub den: BigInt,
}

impl IdealRecord {
    pub fn of(ideal: &FracIdeal) -> Self {
        IdealRecord {
            hnf: ideal.hnf().row_vecs().to_vec(),
            den: ideal.denominator().clone(),
        }
    }

    pub fn rebuild(&self, k: &Arc<NumberField>) -> Result<FracIdeal> {
        FracIdeal::from_hnf_rows(k, &self.hnf, &self.den)
    }
}

/// Order of an ideal class dividing `m`, with every verdict it rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCertificate {
    pub m: u32,
    pub ideal: IdealRecord,
    pub proven_order: ProvenOrder,
    pub evidence: Vec<LadderStep>,
    /// Generator of `ideal^m`, integral-basis coordinates.
    #[serde(with = "big_vec")]
    pub power_witness: Vec<BigInt>,
}

fn mth_power_witness(ideal: &FracIdeal, m: u32, radius: u64) -> Result<Vec<BigInt>> {
    let k = ideal.field();
    let j = ideal.pow(m as u64);
    let nj = j.norm();
    if nj.is_integer() {
        if let Some(r) = exact_root(&nj.to_integer(), k.degree() as u32) {
            if j == FracIdeal::rational(k, &r)? {
                return Ok(k.one().iter().map(|c| c * &r).collect());
            }
        }
    }
    is_principal(&j, radius).witness().ok_or_else(|| {
        Error::Contract(format!("ideal^{} has no generator within radius {}", m, radius))
    })
}

fn narrow(set: &mut Vec<u64>, d: u64, r: &PrincipalityResult) {
    if r.is_principal() {
        set.retain(|c| d % c == 0);
    } else if r.is_nonprincipal() {
        set.retain(|c| d % c != 0);
    }
}

/// Ladder over the divisors `d < m` of `m`, ascending, until one order is
/// left. Requires `ideal^m` principal.
pub fn certify_order(ideal: &FracIdeal, m: u32, radius: u64) -> Result<OrderCertificate> {
    if !ideal.is_integral() {
        return Err(Error::Contract("torsion candidates are integral ideals".to_string()));
    }
    let power_witness = mth_power_witness(ideal, m, radius)?;
    let mut set = divisors(m as u64);
    let mut evidence = Vec::new();
    for d in divisors(m as u64) {
        if d == m as u64 || set.len() == 1 {
            break;
        }
        if !set.iter().any(|c| d % c == 0) || set.iter().all(|c| d % c == 0) {
            continue;
        }
        let r = is_principal(&ideal.pow(d), radius);
        narrow(&mut set, d, &r);
        evidence.push(LadderStep { d, result: r });
    }
    Ok(OrderCertificate {
        m,
        ideal: IdealRecord::of(ideal),
        proven_order: ProvenOrder::from_set(set),
        evidence,
        power_witness,
    })
}

/// Re-derive every verdict of an order certificate.
pub fn verify_order(k: &Arc<NumberField>, cert: &OrderCertificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Contract(msg));
    let ideal = cert.ideal.rebuild(k)?;
    let m = cert.m as u64;
    if FracIdeal::principal(k, &cert.power_witness)? != ideal.pow(m) {
        return fail(format!("power witness does not generate ideal^{}", m));
    }
    let mut set = divisors(m);
    for step in &cert.evidence {
        if m % step.d != 0 || step.d == 0 {
            return fail(format!("ladder step {} does not divide {}", step.d, m));
        }
        let power = ideal.pow(step.d);
        match &step.result.verdict {
            Principality::Principal { .. } => {
                let w = step.result.witness().expect("principal");
                if FracIdeal::principal(k, &w)? != power {
                    return fail(format!("witness at d = {} does not generate", step.d));
                }
            }
            Principality::Nonprincipal { .. } => {
                if !is_principal(&power, 0).is_nonprincipal() {
                    return fail(format!("nonprincipality at d = {} not reproduced", step.d));
                }
            }
            Principality::Unknown { .. } => {}
        }
        narrow(&mut set, step.d, &step.result);
    }
    if ProvenOrder::from_set(set) != cert.proven_order {
        return fail(format!("evidence does not yield order {}", cert.proven_order));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub curve: String,
    #[serde(with = "big")]
    pub t: BigInt,
    /// Defining polynomial, descending coefficients.
    pub field: String,
    #[serde(with = "big")]
    pub field_disc: BigInt,
    #[serde(with = "big")]
    pub q: BigInt,
    #[serde(flatten)]
    pub order: OrderCertificate,
}

impl TorsionCertificate {
    /// First 16 hex digits of the SHA-256 of the canonical JSON.
    pub fn id(&self) -> String {
        let json = serde_json::to_string(self).expect("serializable");
        let digest = Sha256::digest(json.as_bytes());
        hex::encode(digest)[..16].to_string()
    }
}

/// Verify a certificate from scratch: rebuild the field, the ideal `(q, theta)`
/// and every ladder verdict.
pub fn verify_certificate(cert: &TorsionCertificate) -> Result<()> {
    let poly = Poly::parse_descending(&cert.field).map_err(|message| Error::Parse {
        line: 1,
        column: 1,
        message,
    })?;
    let k = Arc::new(NumberField::new(&poly)?);
    verify_certificate_in(&k, cert)
}

pub fn verify_certificate_in(k: &Arc<NumberField>, cert: &TorsionCertificate) -> Result<()> {
    if k.field_disc() != &cert.field_disc {
        return Err(Error::Contract("field discriminant mismatch".to_string()));
    }
    let ideal = cert.order.ideal.rebuild(k)?;
    let one: Vec<BigInt> = k.one().iter().map(|c| c * &cert.q).collect();
    let expected = FracIdeal::from_integral_generators(k, &[one, k.theta_power(1)])?;
    if ideal != expected {
        return Err(Error::Contract(format!("ideal is not (q, theta) for q = {}", cert.q)));
    }
    verify_order(k, &cert.order)
}

/// Is `[L:K]` prime to `n`, so that the norm carries the n-part of Cl(L)
/// onto the n-part of Cl(K)?
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentVerdict {
    pub applies: bool,
    pub gcd: u64,
    pub explanation: String,
}

pub fn norm_descent_check(extension_degree: u64, n: u64) -> DescentVerdict {
    let g = extension_degree.gcd(&n);
    let explanation = if g == 1 {
        format!(
            "[L:K] = {d} is prime to {n}: extending ideals and taking the norm multiplies classes by {d}, \
             which is invertible on the {n}-part, so the class group of L surjects onto the {n}-part of the class group of K",
            d = extension_degree,
            n = n
        )
    } else {
        format!(
            "gcd([L:K], {n}) = {g}: the norm argument needs [L:K] = {d} prime to {n} and is inconclusive",
            d = extension_degree,
            n = n,
            g = g
        )
    };
    DescentVerdict {
        applies: g == 1,
        gcd: g,
        explanation,
    }
}

#[derive(Clone, Debug)]
pub struct TracerConfig {
    pub factor: FactorEffort,
    pub principality_radius: u64,
    pub relations: RelationConfig,
}

impl Default for TracerConfig {
    fn default() -> Self {
        TracerConfig {
            factor: FactorEffort::default(),
            principality_radius: 3,
            relations: RelationConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Good,
    DegenerateRoot,
    DegeneratePower,
    Nonreduced,
    Unfactored,
    Unsupported,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Good => "good",
            RowStatus::DegenerateRoot => "degenerate_root",
            RowStatus::DegeneratePower => "degenerate_power",
            RowStatus::Nonreduced => "nonreduced",
            RowStatus::Unfactored => "unfactored",
            RowStatus::Unsupported => "unsupported",
        }
    }
}

impl From<Verdict> for RowStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Good => RowStatus::Good,
            Verdict::DegenerateRoot => RowStatus::DegenerateRoot,
            Verdict::DegeneratePower => RowStatus::DegeneratePower,
            Verdict::Nonreduced => RowStatus::Nonreduced,
            Verdict::Unfactored => RowStatus::Unfactored,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupSummary {
    #[serde(with = "big_vec")]
    pub invariants: Vec<BigInt>,
    pub certification: Certification,
}

impl ClassGroupSummary {
    pub fn of(cg: &ClassGroup) -> Self {
        ClassGroupSummary {
            invariants: cg.invariants.clone(),
            certification: cg.certification,
        }
    }

    pub fn class_number(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "big")]
    pub t: BigInt,
    pub status: RowStatus,
    /// g(t) of the integral model.
    #[serde(with = "big")]
    pub value: BigInt,
    /// Irreducible factors of the fiber polynomial, descending coefficients.
    pub components: Vec<String>,
    pub field: Option<String>,
    #[serde(with = "big_opt", default)]
    pub field_disc: Option<BigInt>,
    /// [Q(g(t)^(1/m), zeta_m) : Q], recorded for prime m only.
    #[serde(default)]
    pub galois_closure_degree: Option<u64>,
    pub class_group: Option<ClassGroupSummary>,
    /// Ascending q; the first is the headline.
    pub certificates: Vec<TorsionCertificate>,
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub violation: bool,
}

impl ScanRow {
    pub fn headline(&self) -> Option<&TorsionCertificate> {
        self.certificates.first()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCounts {
    pub by_status: BTreeMap<String, usize>,
    pub certificates: usize,
    /// Certificates of exact order above one.
    pub nontrivial: usize,
    /// Certificates left as a divisor set.
    pub undecided: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub curve: String,
    #[serde(with = "big")]
    pub lo: BigInt,
    #[serde(with = "big")]
    pub hi: BigInt,
    pub genus: u64,
    pub warnings: Vec<String>,
    pub rows: Vec<ScanRow>,
    pub counts: ReportCounts,
}

impl SurvivalReport {
    fn tally(rows: &[ScanRow]) -> ReportCounts {
        let mut c = ReportCounts::default();
        for r in rows {
            *c.by_status.entry(r.status.as_str().to_string()).or_default() += 1;
            c.certificates += r.certificates.len();
            c.nontrivial += r.certificates.iter().filter(|x| x.order.proven_order.is_nontrivial()).count();
            c.undecided += r.certificates.iter().filter(|x| x.order.proven_order.exact().is_none()).count();
            c.violations += r.violation as usize;
        }
        c
    }

    pub fn counts_consistent(&self) -> bool {
        Self::tally(&self.rows) == self.counts
    }
}

/// Class group of a fiber field when an engine can handle it.
fn field_class_group(k: &Arc<NumberField>, config: &RelationConfig) -> std::result::Result<ClassGroup, String> {
    if k.degree() == 2 {
        return class_group_of_quadratic_field(k).map_err(|e| e.to_string());
    }
    let b = minkowski_bound(k);
    if b > num_rational::BigRational::from_integer(BigInt::from(config.max_bound)) {
        return Err(format!(
            "class group skipped: Minkowski bound {:.0} exceeds {}",
            b.to_f64().unwrap_or(f64::INFINITY),
            config.max_bound
        ));
    }
    class_group_generic(k, config).map_err(|e| e.to_string())
}

fn scan_row(curve: &SuperellipticCurve, t: &BigInt, config: &TracerConfig) -> ScanRow {
    let model = normalize_integral_model(curve);
    let status = good_parameter(&model, t, &config.factor);
    let mut row = ScanRow {
        t: t.clone(),
        status: status.verdict.into(),
        value: status.value.clone(),
        components: Vec::new(),
        field: None,
        field_disc: None,
        galois_closure_degree: None,
        class_group: None,
        certificates: Vec::new(),
        reason: None,
        violation: false,
    };
    match status.verdict {
        Verdict::DegenerateRoot => {
            row.reason = Some("g(t) = 0".to_string());
            return row;
        }
        Verdict::DegeneratePower => {
            match specialize(&model, t) {
                Ok(fiber) => {
                    row.components = fiber.components.iter().map(|c| c.to_descending_text()).collect();
                    row.reason = Some(format!(
                        "y^{} - ({}) splits into {} components",
                        curve.m(),
                        status.value,
                        fiber.components.len()
                    ));
                }
                Err(e) => {
                    row.status = RowStatus::Unsupported;
                    row.reason = Some(e.to_string());
                }
            }
            return row;
        }
        Verdict::Unfactored => {
            let cof = status.factorization.as_ref().map(|f| f.cofactor.to_string());
            row.reason = Some(format!("cofactor {} of g(t) not factored", cof.unwrap_or_default()));
            return row;
        }
        Verdict::Nonreduced => {
            row.reason = Some("no prime q prime to m divides g(t) exactly".to_string());
        }
        Verdict::Good => {}
    }
    let poly = crate::specialization::binomial(curve.m(), &status.value);
    row.components = vec![poly.to_descending_text()];
    row.field = Some(poly.to_descending_text());
    let k = match NumberField::new(&poly) {
        Ok(k) => Arc::new(k),
        Err(e) => {
            row.status = match e {
                Error::Unfactored(_) => RowStatus::Unfactored,
                _ => RowStatus::Unsupported,
            };
            row.reason = Some(format!("maximal order: {}", e));
            return row;
        }
    };
    row.field_disc = Some(k.field_disc().clone());
    let m = curve.m() as u64;
    if (2..m).all(|d| m % d != 0) {
        // y^m - a irreducible and m prime: the closure has degree m(m - 1)
        row.galois_closure_degree = Some(m * (m - 1));
    }
    let cg = field_class_group(&k, &config.relations);
    match &cg {
        Ok(g) => row.class_group = Some(ClassGroupSummary::of(g)),
        Err(why) => row.reason = Some(why.clone()),
    }
    if status.verdict != Verdict::Good {
        return row;
    }
    let fac = status.factorization.as_ref().expect("good parameters are factored");
    let outcome = candidate_torsion_classes(&k, fac, curve.m()).and_then(|cands| {
        cands
            .into_iter()
            .map(|(q, ideal)| {
                let order = certify_order(&ideal, curve.m(), config.principality_radius)?;
                Ok(TorsionCertificate {
                    curve: curve.key(),
                    t: t.clone(),
                    field: poly.to_descending_text(),
                    field_disc: k.field_disc().clone(),
                    q,
                    order,
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    match outcome {
        Ok(certs) => row.certificates = certs,
        Err(e) => {
            row.status = RowStatus::Unsupported;
            row.violation = matches!(e, Error::Contract(_));
            row.reason = Some(e.to_string());
            return row;
        }
    }
    if let Some(g) = row.class_group.as_ref().filter(|g| g.certification == Certification::Proven) {
        let h = g.class_number();
        for c in &row.certificates {
            if let Some(d) = c.order.proven_order.exact() {
                if !(&h % d).is_zero() {
                    row.violation = true;
                    row.reason = Some(format!("order {} at q = {} does not divide h = {}", d, c.q, h));
                }
            }
        }
    }
    row
}

/// Scan `lo..=hi`. Rows are independent and computed in parallel, then
/// ordered by t.
pub fn scan(curve: &SuperellipticCurve, lo: &BigInt, hi: &BigInt, config: &TracerConfig) -> SurvivalReport {
    let mut ts = Vec::new();
    let mut t = lo.clone();
    while &t <= hi {
        ts.push(t.clone());
        t += 1;
    }
    let rows: Vec<ScanRow> = ts.par_iter().map(|t| scan_row(curve, t, config)).collect();
    let g = genus(curve);
    let mut warnings = Vec::new();
    if g == 0 {
        warnings.push(format!(
            "genus 0: the Jacobian of {} is trivial, so no torsion class persists across fibers",
            curve
        ));
    }
    let counts = SurvivalReport::tally(&rows);
    SurvivalReport {
        curve: curve.key(),
        lo: lo.clone(),
        hi: hi.clone(),
        genus: g,
        warnings,
        rows,
        counts,
    }
}
