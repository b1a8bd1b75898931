use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use branchcover::arith::Poly;
use branchcover::curve::{normalize_integral_model, validate_curve};
use branchcover::cyclotomic::{bernoulli_exact, kummer_consistent, von_staudt_denominator, BernoulliTable};
use branchcover::field::NumberField;
use branchcover::forms::{reduced_definite_forms, reduced_indefinite_forms, Form};
use branchcover::ideal::FracIdeal;
use branchcover::report::catalog::{compact, CatalogRecord, SCHEMA_VERSION};
use branchcover::report::{parse_config, render, ScanConfig};
use branchcover::specialization::specialize;

fn bi(n: i64) -> BigInt {
    BigInt::from(n)
}

fn fields() -> &'static [Arc<NumberField>] {
    static F: OnceLock<Vec<Arc<NumberField>>> = OnceLock::new();
    F.get_or_init(|| {
        [vec![5, 0, 1], vec![-2, 0, 0, 1], vec![-1, -1, 0, 1], vec![-5, 0, 1]]
            .iter()
            .map(|c| Arc::new(NumberField::new(&Poly::from_ints(c)).unwrap()))
            .collect()
    })
}

fn ideal_in(k: &Arc<NumberField>, q: i64, coords: &[i64]) -> FracIdeal {
    let n = k.degree();
    let mut rat = vec![BigInt::zero(); n];
    rat[0] = bi(q);
    let elt: Vec<BigInt> = (0..n).map(|i| bi(coords[i])).collect();
    FracIdeal::from_integral_generators(k, &[rat, elt]).unwrap()
}

fn small_ideal() -> impl Strategy<Value = (i64, Vec<i64>)> {
    (1i64..40, prop::collection::vec(-6i64..=6, 3))
}

fn bernoulli() -> &'static BernoulliTable {
    static T: OnceLock<BernoulliTable> = OnceLock::new();
    T.get_or_init(|| bernoulli_exact(110))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// (sum_{a<p} a^k mod p^2) / p, which is B_k mod p for even k <= p - 3.
fn power_sum_residue(k: u64, p: u64) -> u64 {
    let p2 = p * p;
    let s = (1..p).fold(0u64, |acc, a| {
        let mut t = 1u64;
        for _ in 0..k {
            t = t * a % p2;
        }
        (acc + t) % p2
    });
    s / p
}

fn forms_of(d: i64) -> Vec<Form> {
    if d < 0 {
        reduced_definite_forms(&bi(d))
    } else {
        reduced_indefinite_forms(&bi(d))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_norm_is_multiplicative(fi in 0usize..4, a in small_ideal(), b in small_ideal()) {
        let k = &fields()[fi];
        let x = ideal_in(k, a.0, &a.1);
        let y = ideal_in(k, b.0, &b.1);
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        prop_assert_eq!(xy, y.mul(&x).unwrap());
    }

    #[test]
    fn hnf_rows_round_trip(fi in 0usize..4, a in small_ideal()) {
        let k = &fields()[fi];
        let x = ideal_in(k, a.0, &a.1);
        let back = FracIdeal::from_hnf_rows(k, x.hnf().row_vecs(), x.denominator()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn form_classes_form_an_abelian_group(
        di in 0usize..5, i in 0usize..64, j in 0usize..64, l in 0usize..64,
    ) {
        let d = [-84i64, -260, -1155, 229, 40][di];
        let reps = forms_of(d);
        let (f, g, h) = (&reps[i % reps.len()], &reps[j % reps.len()], &reps[l % reps.len()]);
        prop_assert_eq!(f.mul_class(g), g.mul_class(f));
        prop_assert_eq!(f.mul_class(g).mul_class(h), f.mul_class(&g.mul_class(h)));
        let one = Form::principal(&bi(d)).canonical();
        prop_assert_eq!(f.mul_class(&f.inverse()), one);
    }

    #[test]
    fn bernoulli_matches_power_sums(p in 5u64..110, k in 1u64..55) {
        prop_assume!(is_prime(p));
        let k = 2 * k;
        prop_assume!(k <= p - 3);
        let b = bernoulli().get(k as usize).unwrap();
        let pb = bi(p as i64);
        let den = b.denom().mod_floor(&pb);
        let inv = den.modpow(&(&pb - 2u32), &pb);
        let lhs = (b.numer() * inv).mod_floor(&pb).to_u64().unwrap();
        prop_assert_eq!(lhs, power_sum_residue(k, p));
    }

    #[test]
    fn compaction_is_idempotent(entries in prop::collection::vec((0usize..6, 0u64..5), 0..30)) {
        let records: Vec<CatalogRecord> = entries
            .iter()
            .map(|&(key, ts)| CatalogRecord {
                schema_version: SCHEMA_VERSION,
                key: format!("1,0,{}", key),
                field_disc: bi(-4 * key as i64 - 3),
                class_group: None,
                certificates: Vec::new(),
                tool_version: "test".to_string(),
                timestamp: ts,
            })
            .collect();
        let keys: BTreeSet<&String> = records.iter().map(|r| &r.key).collect();
        let once = compact(records.clone());
        prop_assert_eq!(once.len(), keys.len());
        prop_assert_eq!(compact(once.clone()), once.clone());
        // timestamps of unchanged content stay at the first sighting
        for r in &once {
            let first = records.iter().find(|x| x.key == r.key).unwrap();
            prop_assert_eq!(r.timestamp, first.timestamp);
        }
    }

    #[test]
    fn config_render_round_trips(
        m in 2u32..9, c in -20i64..20, lo in -100i64..100, len in 0i64..50, seed in 0u64..1000,
        factor in prop::option::of(1u64..1_000_000), radius in 1u64..6,
        relations in prop::option::of(1u64..5000), csv in any::<bool>(),
    ) {
        let cfg = ScanConfig {
            m,
            f: Poly::from_ints(&[c, 1, 1]),
            lo: bi(lo),
            hi: bi(lo + len),
            seed,
            factor_budget: factor,
            principality_radius: radius,
            relation_budget: relations,
            csv: csv.then(|| PathBuf::from("out/rows.csv")),
            catalog: None,
            report: Some(PathBuf::from("report.json")),
        };
        prop_assert_eq!(parse_config(&render(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn fiber_components_multiply_back(m in 2u32..7, c in -12i64..12, t in -40i64..40) {
        let model = normalize_integral_model(&validate_curve(m, Poly::from_ints(&[c, 1, 1])).unwrap());
        let Ok(fiber) = specialize(&model, &bi(t)) else {
            prop_assert_eq!(bi(t * t + t + c), bi(0));
            return Ok(());
        };
        let degrees: usize = fiber.components.iter().map(|g| g.degree().unwrap()).sum();
        prop_assert_eq!(degrees, m as usize);
        let prod = fiber.components.iter().fold(Poly::from_ints(&[1]), |acc, g| &acc * g);
        prop_assert_eq!(prod, fiber.defining_polynomial());
        for g in &fiber.components {
            prop_assert!(g.leading().is_one());
        }
    }
}

#[test]
fn von_staudt_clausen_denominators() {
    let t = bernoulli_exact(60);
    for k in (2..=60u64).step_by(2) {
        // product of primes p with (p - 1) | k
        let oracle: BigInt = (2..=k + 1)
            .filter(|&p| is_prime(p) && k % (p - 1) == 0)
            .map(|p| bi(p as i64))
            .product();
        assert_eq!(von_staudt_denominator(k), oracle, "k = {}", k);
        assert_eq!(t.get(k as usize).unwrap().denom(), &oracle, "k = {}", k);
        // B_k + sum 1/p is an integer
        let mut s = t.get(k as usize).unwrap().clone();
        for p in (2..=k + 1).filter(|&p| is_prime(p) && k % (p - 1) == 0) {
            s += num_rational::BigRational::new(BigInt::one(), bi(p as i64));
        }
        assert!(s.is_integer(), "k = {}", k);
    }
}

#[test]
fn kummer_criterion_agrees_with_minus_class_numbers() {
    for p in (3..=67u64).filter(|&p| is_prime(p)) {
        assert!(kummer_consistent(p).unwrap(), "p = {}", p);
    }
}

