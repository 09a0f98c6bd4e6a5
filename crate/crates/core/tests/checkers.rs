use relalg::checkers::{check, table1_matrix, Bounds, Property, Status, TABLE1_EXPECTED};
use relalg::oracle::Oracle;
use relalg::structures::StructureClass;

fn verdict(op: &str, p: Property) -> relalg::checkers::Verdict {
    let op = Oracle::parse(op).unwrap();
    check(&op, p, &Bounds::for_oracle(&op).with_max_size(2), 0).unwrap()
}

#[test]
fn composition_preserves_everything() {
    for p in [Property::Homsafe, Property::Subsafe, Property::Fp, Property::Forward] {
        assert_eq!(verdict("f ; g", p).status, Status::PassBounded, "{}", p.name());
    }
}

#[test]
fn failures_carry_reverified_witnesses() {
    for (op, p) in [("f | g", Property::Fp), ("-f", Property::Homsafe), ("ran(f)", Property::Forward), ("f^", Property::Fp)] {
        let v = verdict(op, p);
        assert_eq!(v.status, Status::Fail, "{op} {}", p.name());
        assert!(v.reverified);
        let c = v.counterexample.as_ref().unwrap();
        assert!(c.max_domain() <= 4);
        assert_eq!(v.to_json()["schema"], 1);
    }
}

#[test]
fn verdicts_are_deterministic() {
    let a = verdict("f \\ g", Property::Homsafe).to_json();
    let b = verdict("f \\ g", Property::Homsafe).to_json();
    assert_eq!(a, b);
}

#[test]
fn class_override() {
    let op = Oracle::parse("f ; g").unwrap();
    let mut bounds = Bounds::for_oracle(&op).with_max_size(2);
    bounds.class = Some(StructureClass::All);
    let v = check(&op, Property::Forward, &bounds, 0).unwrap();
    assert_eq!(v.class, StructureClass::All);
}

#[test]
fn table_at_size_two_matches_but_for_complement() {
    let report = table1_matrix(Some(2), 0).unwrap();
    assert_eq!(report.rows.len(), TABLE1_EXPECTED.len());
    let off: Vec<&str> = report.rows.iter().filter(|r| !r.matches()).map(|r| r.name).collect();
    assert_eq!(off, ["complement"]);
    assert!(report.render().contains("MISMATCH"));
}
