use hyperaccel::catalog::{
    first_mismatch, measured_rate, ratio_matches, run_for, verify_all, IdentityCatalog, Outcome, Status,
};
use hyperaccel::exact::Q;
use hyperaccel::par::Exec;
use hyperaccel::recurrence::RecurrenceCatalog;
use hyperaccel::series::EvalOptions;

#[test]
fn every_identity_verifies_at_fifty_digits() {
    let cat = IdentityCatalog::builtin().unwrap();
    let reports = verify_all(&cat, 50, &EvalOptions::default(), Exec::Parallel);
    for (rec, rep) in cat.identities.iter().zip(reports) {
        let rep = rep.unwrap_or_else(|e| panic!("{}: {e}", rec.id));
        assert_eq!(rep.outcome, Outcome::Pass, "{rep:?}");
        let want = rec.digits.unwrap_or(50) as i64;
        assert!(rep.digits_achieved >= want, "{rep:?}");
        assert!(rep.rate_ok, "{}: rate {:?} vs {}", rec.id, rep.rate_measured, rec.rate);
    }
}

#[test]
fn measured_rates_are_within_one_percent() {
    let cat = IdentityCatalog::builtin().unwrap();
    let one_percent = Q::new(1.into(), 100.into());
    for rec in &cat.identities {
        let est = measured_rate(rec).unwrap();
        assert!(est.relative_error(&rec.rate_q().unwrap()) < one_percent, "{}: {:?}", rec.id, est);
    }
}

#[test]
fn accelerated_rows_match_their_routes() {
    let recs = RecurrenceCatalog::builtin().unwrap();
    let cat = IdentityCatalog::builtin().unwrap();
    for rec in cat.identities.iter().filter(|r| r.accel.is_some()) {
        let run = run_for(&recs, &cat, rec, 30).unwrap();
        assert_eq!(run.identity.as_deref(), Some(rec.id.as_str()));
        assert_eq!(first_mismatch(rec, &run, 30).unwrap(), None, "{}", rec.id);
        assert!(ratio_matches(&recs, rec, 11).unwrap(), "{}", rec.id);
    }
}

#[test]
fn conjectured_rows_stay_flagged() {
    let cat = IdentityCatalog::builtin().unwrap();
    let conj: Vec<&str> = cat
        .identities
        .iter()
        .filter(|r| r.status == Status::Conjectured)
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(conj, ["pi4-conjectured", "invpi4-zhao"]);
}
