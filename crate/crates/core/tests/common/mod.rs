//! Seeded property checks shared by the property suite and the acceptance
//! target. Each check runs a deterministic proptest runner seeded from its
//! argument and reports the first counterexample as an error string.

#![allow(dead_code)]

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use hyperaccel::catalog::{accelerate, IdentityCatalog};
use hyperaccel::exact::{pochhammer, q, qf, rf_equal, MultiPoly, RationalFunction, Q};
use hyperaccel::recurrence::RecurrenceCatalog;
use hyperaccel::series::{compile_pfq, evaluate_capped, evaluate_terms, partial_sum_exact, EvalOptions, PFQSpec};
use hyperaccel::Error;

pub const SEEDS: [u64; 3] = [0x5eed, 17, 2024];

pub fn runner(seed: u64, cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

fn rational() -> impl Strategy<Value = Q> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| qf(n, d))
}

/// Sparse polynomial in `x`, `y` with per-variable degree at most `deg`.
fn poly(deg: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0..=deg, 0..=deg, -4i64..=4), 1..6)
        .prop_map(|ts| MultiPoly::from_terms(&["x", "y"], ts.into_iter().map(|(i, j, c)| (vec![i, j], q(c)))))
}

fn nonzero_poly(deg: u32) -> impl Strategy<Value = MultiPoly> {
    poly(deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn rf(deg: u32) -> impl Strategy<Value = RationalFunction> {
    (poly(deg), nonzero_poly(deg)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

/// `rf_equal` agrees with expanding `num(f) den(g) - num(g) den(f)` on
/// rational functions of per-variable degree at most 4. Pairs are random,
/// equal by a common factor, or equal up to a small perturbation.
pub fn rf_equal_matches_expansion(seed: u64) -> Result<(), String> {
    let pairs = prop_oneof![
        (rf(4), rf(4)),
        (poly(2), nonzero_poly(2), nonzero_poly(2)).prop_map(|(a, b, e)| {
            let f = RationalFunction::new(a.clone(), b.clone()).unwrap();
            let g = RationalFunction::new(&a * &e, &b * &e).unwrap();
            (f, g)
        }),
        (rf(4), -3i64..=3).prop_map(|(f, c)| {
            let g = &f + &RationalFunction::constant(qf(c, 97));
            (f, g)
        }),
    ];
    runner(seed, 96)
        .run(&pairs, |(f, g)| {
            let oracle = (&(f.num() * g.den()) - &(g.num() * f.den())).is_zero();
            prop_assert_eq!(rf_equal(&f, &g, seed), oracle, "f = {}, g = {}", f, g);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Evaluation commutes with `+` and `*` away from poles.
pub fn eval_is_a_ring_homomorphism(seed: u64) -> Result<(), String> {
    runner(seed, 96)
        .run(&(rf(3), rf(3), rational(), rational()), |(f, g, x, y)| {
            let at: HashMap<String, Q> = [("x".to_string(), x), ("y".to_string(), y)].into();
            let (Ok(a), Ok(b)) = (f.eval(&at), g.eval(&at)) else {
                return Ok(());
            };
            prop_assert_eq!((&f + &g).eval(&at).unwrap(), &a + &b);
            prop_assert_eq!((&f * &g).eval(&at).unwrap(), &a * &b);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn pochhammer_splits(seed: u64) -> Result<(), String> {
    runner(seed, 128)
        .run(&(rational(), 0u64..25, 0u64..25), |(a, m, n)| {
            let mq = Q::from_integer((m as i64).into());
            prop_assert_eq!(pochhammer(&a, m + n), pochhammer(&a, m) * pochhammer(&(&a + &mq), n));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Arithmetic results are reduced with a positive denominator.
pub fn rationals_stay_canonical(seed: u64) -> Result<(), String> {
    let canonical = |v: &Q| v.denom().is_positive() && v.numer().gcd(v.denom()) == 1.into();
    runner(seed, 256)
        .run(&(rational(), rational()), |(a, b)| {
            for v in [&a + &b, &a - &b, &a * &b] {
                prop_assert!(canonical(&v), "{}", v);
            }
            if !b.is_zero() {
                prop_assert!(canonical(&(&a / &b)));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Random pFq with `p <= q + 1`, positive lower parameters and `|z| < 1`.
fn convergent_pfq() -> impl Strategy<Value = PFQSpec> {
    let param = (1i64..=40, 1i64..=6).prop_map(|(n, d)| qf(n, d));
    (0usize..=3, prop::collection::vec(param.clone(), 3), prop::collection::vec(param, 2), (-9i64..=9, 10i64..=12))
        .prop_map(|(p, ups, lows, (zn, zd))| {
            let q_len = p.saturating_sub(1).min(2);
            PFQSpec::new(ups[..p].to_vec(), lows[..q_len].to_vec(), qf(zn, zd))
        })
}

/// `term(k)` by ratio iteration equals the Pochhammer quotient
/// `prod (a_i)_k / prod (b_j)_k * z^k / k!` for `k <= 30`.
pub fn term_recomputation(seed: u64) -> Result<(), String> {
    runner(seed, 50)
        .run(&convergent_pfq(), |spec| {
            let t = compile_pfq(&spec).unwrap();
            for k in 0..=30u64 {
                let mut direct = Q::from_integer(1.into());
                for a in &spec.upper {
                    direct *= pochhammer(a, k);
                }
                for b in &spec.lower {
                    direct /= pochhammer(b, k);
                }
                direct /= pochhammer(&q(1), k);
                for _ in 0..k {
                    direct *= &spec.argument;
                }
                prop_assert_eq!(t.term(k as i64).unwrap(), direct, "k = {}", k);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `|S(2N) - S(N)| <= tail bound at N` for `N` in `{10, 20, 40}`, on random
/// convergent pFq series.
pub fn tail_bound_is_sound(seed: u64) -> Result<(), String> {
    let opts = EvalOptions::default();
    runner(seed, 40)
        .run(&convergent_pfq(), |spec| {
            let t = compile_pfq(&spec).unwrap();
            for n in [10u64, 20, 40] {
                let Ok(r) = evaluate_terms(&t, n, 10, &opts) else { continue };
                let gap = (partial_sum_exact(&t, 2 * n).unwrap() - partial_sum_exact(&t, n).unwrap()).abs();
                prop_assert!(gap <= r.tail_bound, "{:?} N = {}: gap {} > bound {}", spec, n, gap, r.tail_bound);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// The same inequality for every catalog series.
pub fn catalog_tail_bounds_are_sound() -> Result<usize, String> {
    let cat = IdentityCatalog::builtin().map_err(|e| e.to_string())?;
    let opts = EvalOptions::default();
    let mut checked = 0;
    for rec in &cat.identities {
        let t = rec.term().map_err(|e| e.to_string())?;
        for n in [10u64, 20, 40] {
            let Ok(r) = evaluate_terms(&t, n, 10, &opts) else { continue };
            let gap = (partial_sum_exact(&t, 2 * n).unwrap() - partial_sum_exact(&t, n).unwrap()).abs();
            if gap > r.tail_bound {
                return Err(format!("{} N = {n}: gap {gap} > bound {}", rec.id, r.tail_bound));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Emitted partial sum plus residual equals the starting series within the
/// combined enclosure radii, for `m` in `{1, 5, 10}`. Runs every catalog
/// route once and, per seed, two random starting points on each of the
/// `s(x,y)` and 6F5 compositions.
///
/// Starting series of rate one are only summed to the term cap, so their
/// enclosures are loose; the residual is asked for no more digits than the
/// starting series reached.
pub fn lemma_is_exact(seeds: &[u64]) -> Result<usize, String> {
    let recs = RecurrenceCatalog::builtin().map_err(|e| e.to_string())?;
    let ids = IdentityCatalog::builtin().map_err(|e| e.to_string())?;
    let mut starts: Vec<(String, Vec<Q>)> = Vec::new();
    for r in &ids.identities {
        if let Some(a) = &r.accel {
            let p = a.point_q().map_err(|e| e.to_string())?;
            if !starts.iter().any(|(route, q)| route == &a.route && q == &p) {
                starts.push((a.route.clone(), p));
            }
        }
    }
    let xs = (1i64..=8, 1i64..=4).prop_map(|(n, d)| qf(n, d));
    for &seed in seeds {
        let mut rng = runner(seed, 1);
        for route in ["S_EQ1+S_EQ2", "F65_X+F65_Y"] {
            for _ in 0..2 {
                let x = xs.new_tree(&mut rng).unwrap().current();
                let y = &x + Q::from_integer(1.into()) + xs.new_tree(&mut rng).unwrap().current();
                starts.push((route.to_string(), vec![x, y]));
            }
        }
    }
    let opts = EvalOptions { term_cap: 1000, ..EvalOptions::default() };
    let mut checked = 0;
    for (route, p) in &starts {
        let rec = recs.route(route).map_err(|e| e.to_string())?;
        let start = recs.family(&rec.family).and_then(|f| f.instantiate(p));
        let Ok(start) = start else { continue };
        let Ok(whole) = evaluate_capped(&start, 30, &opts) else { continue };
        for m in [1usize, 5, 10] {
            let digits = whole.digits_correct.clamp(3, 30) as u32;
            let run = match accelerate(&recs, &ids, route, p, m, Some(digits)) {
                Ok(r) => r,
                Err(Error::AccelerationFailure(_) | Error::InadmissibleParameters(_)) => continue,
                Err(e) => return Err(format!("{route} at {p:?}: {e}")),
            };
            let rem = run.remainder.clone().expect("requested");
            let gap = (run.partial_sum() + &rem.center - &whole.value.center).abs();
            if gap > &rem.radius + &whole.value.radius {
                return Err(format!("{route} at {p:?}, m = {m}: gap {gap}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `compose(compose(a, b), c)` and `compose(a, compose(b, c))` agree in
/// `r1` and `r2` for random triples of same-family recurrences.
pub fn composition_is_associative(seed: u64) -> Result<(), String> {
    let recs = RecurrenceCatalog::builtin().map_err(|e| e.to_string())?;
    let endo: Vec<_> = recs.recurrences().iter().filter(|r| r.is_endo() && r.lift.is_none()).collect();
    let mut families: Vec<Vec<usize>> = Vec::new();
    for (i, r) in endo.iter().enumerate() {
        match families.iter_mut().find(|g| endo[g[0]].family == r.family) {
            Some(g) => g.push(i),
            None => families.push(vec![i]),
        }
    }
    families.retain(|g| g.len() >= 2);
    let triples = (0..families.len()).prop_flat_map(|f| (Just(f), prop::array::uniform3(0..families[f].len())));
    runner(seed, 6)
        .run(&triples, |(f, [i, j, k])| {
            let [a, b, c] = [i, j, k].map(|t| endo[families[f][t]]);
            let left = a.compose(b).unwrap().compose(c).unwrap();
            let right = a.compose(&b.compose(c).unwrap()).unwrap();
            prop_assert!(rf_equal(&left.r1, &right.r1, seed), "{} {} {}", a.id, b.id, c.id);
            prop_assert!(rf_equal(&left.r2, &right.r2, seed), "{} {} {}", a.id, b.id, c.id);
            prop_assert_eq!(left.shift, right.shift);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// One independent computation of a reference constant.
pub enum Oracle {
    /// A catalog identity, compared with its own constant expression.
    Identity(&'static str),
    /// `sum_{n >= lower} summand = constant`.
    Series(&'static str, i64, &'static str),
}

/// Two independent series per stored constant. The remaining constants are
/// powers and reciprocals of these, checked for consistency in the library.
pub const DUAL_ORACLES: [(&str, [Oracle; 2]); 7] = [
    ("pi", [Oracle::Identity("invpi-ramanujan42"), Oracle::Identity("pi-c")]),
    ("pi2", [Oracle::Identity("pi2-t7"), Oracle::Identity("pi2-t5")]),
    ("inv_pi2", [Oracle::Identity("invpi2-guillera03"), Oracle::Identity("invpi2-guillera08")]),
    ("catalan", [Oracle::Identity("catalan-t2"), Oracle::Identity("catalan-t4")]),
    ("zeta2", [Oracle::Identity("zeta2-especially"), Oracle::Identity("zeta2-basel16")]),
    ("zeta3", [Oracle::Identity("zeta3-28"), Oracle::Series("5/2*(-1)^(n-1)/(n^3*binom(2*n,n))", 1, "zeta3")]),
    ("ln2", [Oracle::Series("1/(n*2^n)", 1, "ln2"), Oracle::Series("2/(3*(2*n+1)*9^n)", 0, "ln2")]),
];

/// Digits `d` with `|S - C| <= max(1, |C|) 10^-d`, from a certified
/// enclosure of `S` to `target` digits.
pub fn agreement(term: &hyperaccel::series::HyperTerm, c: &Q, target: u32) -> Result<i64, String> {
    use hyperaccel::exact::rational::floor_log10;
    let r = hyperaccel::series::evaluate(term, target).map_err(|e| e.to_string())?;
    let bound = (&r.value.center - c).abs() + &r.value.radius;
    let scale = if c.abs() < q(1) { q(1) } else { c.abs() };
    Ok(if bound.is_zero() { i64::MAX } else { floor_log10(&(scale / bound)) })
}

/// Digits on which the oracle reproduces its constant from the store.
pub fn oracle_digits(o: &Oracle, target: u32) -> Result<i64, String> {
    let err = |e: Error| e.to_string();
    let (term, c) = match o {
        Oracle::Identity(id) => {
            let cat = IdentityCatalog::builtin().map_err(err)?;
            let rec = cat.get(id).map_err(err)?;
            (rec.term().map_err(err)?, rec.constant_value().map_err(err)?)
        }
        Oracle::Series(s, lower, c) => (
            hyperaccel::series::compile_summand(s, "n", *lower).map_err(err)?,
            hyperaccel::catalog::constant_value(c).map_err(err)?,
        ),
    };
    agreement(&term, &c, target)
}
