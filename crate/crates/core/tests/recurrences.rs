use hyperaccel::exact::{q, qf, rf_equal, Q};
use hyperaccel::par::Exec;
use hyperaccel::recurrence::{
    lift_consistent, numeric_gap, residual, sample_point, sweep_terminating, view_consistent, RecurrenceCatalog,
};
use hyperaccel::Error;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cat() -> RecurrenceCatalog {
    RecurrenceCatalog::builtin().unwrap()
}

#[test]
fn every_entry_holds_for_terminating_instances() {
    let c = cat();
    for rec in c.recurrences() {
        let rep = sweep_terminating(&c, rec, 25, 20, 0x5eed, Exec::Parallel).unwrap();
        assert_eq!(rep.checked, 26 * 20, "{}", rec.id);
        assert!(rep.passed(), "{} failed at {:?}", rec.id, rep.failures);
    }
}

#[test]
fn every_entry_holds_numerically() {
    let c = cat();
    let tol = Q::new(1.into(), num_bigint::BigInt::from(10).pow(40));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for rec in c.recurrences() {
        let mut done = 0;
        while done < 10 {
            let x = Q::new(rng.gen_range(1..=30).into(), 10.into());
            let y = Q::new(rng.gen_range(200..=300).into(), 10.into());
            let p = sample_point(rec, &x, &y).unwrap();
            match numeric_gap(&c, rec, &p, 50) {
                Ok(gap) => {
                    assert!(gap < tol, "{} at {p:?}: gap {gap}", rec.id);
                    done += 1;
                }
                Err(Error::InadmissibleParameters(_)) => continue,
                Err(e) => panic!("{} at {p:?}: {e}", rec.id),
            }
        }
    }
}

#[test]
fn presentation_views_match_their_canonical_entries() {
    let c = cat();
    for seed in [0, 7, 991] {
        for rec in c.recurrences().iter().filter(|r| r.view.is_some()) {
            assert!(view_consistent(&c, rec, seed).unwrap(), "{}", rec.id);
        }
    }
}

#[test]
fn composition_is_associative() {
    let c = cat();
    for ids in [["F65_X", "F65_Y", "F65_X"], ["F54M1_Y", "F54M1_X", "F54M1_Y"], ["S_EQ1", "S_EQ2", "S_EQ1"]] {
        let [a, b, d] = ids.map(|i| c.get(i).unwrap());
        let left = a.compose(b).unwrap().compose(d).unwrap();
        let right = a.compose(&b.compose(d).unwrap()).unwrap();
        for seed in [1, 2, 3] {
            assert!(rf_equal(&left.r1, &right.r1, seed), "{ids:?}");
            assert!(rf_equal(&left.r2, &right.r2, seed), "{ids:?}");
        }
        assert_eq!(left.shift, right.shift);
    }
}

#[test]
fn knopp_display_values() {
    // pi^2/12 = 7/8 - 8/4 (17/576 - 192/4 (27/345600 - 1080/4 (...)))
    // in the normalisation K(p) = knopp(p) / p!^2, r1_K = r1 / p!^2, r2_K = -p (p+1)^3 / 4.
    let c = cat();
    let rec = c.get("KNOPP_P").unwrap();
    assert!(lift_consistent(&c, rec, 5).unwrap());
    let fact = |p: i64| (1..=p).fold(q(1), |a, i| a * q(i));
    let mut p = 1;
    let mut shown = Vec::new();
    for _ in 0..3 {
        let a = rec.apply(&[q(p)]).unwrap();
        let r1k = a.r1 / (fact(p) * fact(p));
        let r2k = qf(-p * (p + 1) * (p + 1) * (p + 1), 4);
        // The displayed r2 is the normalised r2 rescaled by p!^2 / (p+2)!^2.
        assert_eq!(a.r2, &r2k * fact(p) * fact(p) / (fact(p + 2) * fact(p + 2)));
        shown.push((r1k, r2k));
        p += 2;
    }
    assert_eq!(shown[0], (qf(7, 8), qf(-8, 4)));
    assert_eq!(shown[1], (qf(17, 576), qf(-192, 4)));
    assert_eq!(shown[2], (qf(27, 345600), qf(-1080, 4)));
    // The nested display and the iterated form agree term by term.
    let terms = rec.lemma_terms(&[q(1)], 3).unwrap();
    assert_eq!(terms[0], qf(7, 8));
    assert_eq!(terms[1], qf(-8, 4) * qf(17, 576));
    assert_eq!(terms[2], qf(-8, 4) * qf(-192, 4) * qf(27, 345600));
}

#[test]
fn remainders_shrink() {
    let c = cat();
    let t = c.get("T3M1_Y2").unwrap();
    let p = [qf(1, 2), q(2)];
    let r: Vec<Q> = (4..=6).map(|m| residual(&c, t, &p, m, 20).unwrap().center.abs()).collect();
    // Independent value at m = 5: 1.2961511074867987e-5 (Pochhammer sum of t(1/2, 12)).
    let r5 = hyperaccel::exact::rational::parse_decimal("0.000012961511074867987").unwrap();
    assert!((&r[1] - r5).abs() < Q::new(1.into(), num_bigint::BigInt::from(10).pow(20)));
    assert!(r[2] < Q::new(1.into(), 100_000.into()));
    assert!(r[2] < r[1] && r[1] < r[0]);
    let f = c.get("F65_Y").unwrap();
    let p = [qf(1, 2), qf(3, 2)];
    let r3 = residual(&c, f, &p, 3, 20).unwrap().center.abs();
    let r6 = residual(&c, f, &p, 6, 20).unwrap().center.abs();
    assert!(r6 < r3);
}
