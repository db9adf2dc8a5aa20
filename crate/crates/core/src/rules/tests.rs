use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::emtt::{parse_prop, Prop, Term};
use crate::set::ParseOptions;

fn cat() -> Catalog {
    Catalog::builtin()
}

#[test]
fn flavor_counts() {
    let c = cat();
    assert_eq!(c.rules().len(), 71);
    assert_eq!(c.list_rules(TheoryFlavor::Czf).len(), 65);
    assert_eq!(c.list_rules(TheoryFlavor::Izf).len(), 66);
    assert_eq!(c.list_rules(TheoryFlavor::Zf).len(), 67);
}

#[test]
fn flavor_specific_rules() {
    let c = cat();
    let ids = |f| c.list_rules(f).into_iter().map(|r| r.id.as_str()).collect::<Vec<_>>();
    assert!(ids(TheoryFlavor::Zf).contains(&"excluded-middle"));
    assert!(!ids(TheoryFlavor::Izf).contains(&"excluded-middle"));
    assert!(!ids(TheoryFlavor::Czf).contains(&"powerset-formation"));
    assert!(ids(TheoryFlavor::Izf).contains(&"powerset-formation"));
    assert!(ids(TheoryFlavor::Czf).contains(&"strong-collection"));
    assert!(!ids(TheoryFlavor::Zf).contains(&"subset-collection"));
}

#[test]
fn every_flavor_has_separation_characterization() {
    let c = cat();
    for f in TheoryFlavor::ALL {
        let sep: Vec<_> = c
            .list_rules(f)
            .into_iter()
            .filter(|r| r.id.ends_with("separation-characterization"))
            .collect();
        assert_eq!(sep.len(), 1, "{}", f);
        let phi = sep[0].meta(&Name::new("phi")).unwrap();
        let want = if f == TheoryFlavor::Czf { MetaKind::SmallProposition } else { MetaKind::Proposition };
        assert_eq!(phi.kind, want);
    }
}

#[test]
fn render_round_trip() {
    let c = cat();
    let back = Catalog::parse(&c.render()).unwrap();
    assert_eq!(back, c);
}

#[test]
fn v_formation_instance() {
    let inst = parse_instance("(instance v-formation (subst) (premises) (conclusion (col (V))))").unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Czf, &inst), Ok(()));
}

#[test]
fn pairing_instance() {
    let inst = parse_instance(
        "(instance pairing-formation (subst (a (emptyV)) (b (omegaV)))
           (premises (in (emptyV) (V)) (in (omegaV) (V)))
           (conclusion (in (pairV (emptyV) (omegaV)) (V))))",
    )
    .unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Izf, &inst), Ok(()));
}

#[test]
fn star_equation_rejects_omega() {
    let inst = parse_instance("(instance star-equation (subst) (premises) (conclusion (eq (star) (omegaV) (N1))))").unwrap();
    match cat().match_instance(TheoryFlavor::Zf, &inst) {
        Err(MatchError::Mismatch { at: Location::Conclusion, .. }) => {}
        other => panic!("{:?}", other),
    }
    let ok = parse_instance("(instance star-equation (subst) (premises) (conclusion (eq (star) (emptyV) (N1))))").unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Zf, &ok), Ok(()));
}

#[test]
fn flavor_and_id_errors() {
    let inst = parse_instance(
        "(instance excluded-middle (subst (phi (bot))) (premises (prop (bot))) (conclusion (true-in (or (bot) (imp (bot) (bot))))))",
    )
    .unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Zf, &inst), Ok(()));
    assert!(matches!(cat().match_instance(TheoryFlavor::Czf, &inst), Err(MatchError::NotInFlavor { .. })));
    let mut other = inst.clone();
    other.schema = "no-such-rule".to_string();
    assert!(matches!(cat().match_instance(TheoryFlavor::Zf, &other), Err(MatchError::UnknownSchema(_))));
}

#[test]
fn first_failing_premise_is_reported() {
    let inst = parse_instance(
        "(instance pairing-formation (subst (a (emptyV)) (b (omegaV)))
           (premises (in (emptyV) (V)) (in (emptyV) (V)))
           (conclusion (in (pairV (emptyV) (omegaV)) (V))))",
    )
    .unwrap();
    match cat().match_instance(TheoryFlavor::Czf, &inst) {
        Err(MatchError::Mismatch { at: Location::Premise(1), .. }) => {}
        other => panic!("{:?}", other),
    }
}

#[test]
fn substitution_kinds_are_checked() {
    let bad = parse_instance(
        "(instance pairing-formation (subst (a (V)) (b (omegaV)))
           (premises (in (emptyV) (V)) (in (omegaV) (V)))
           (conclusion (in (pairV (emptyV) (omegaV)) (V))))",
    )
    .unwrap();
    assert!(matches!(
        cat().match_instance(TheoryFlavor::Czf, &bad),
        Err(MatchError::Mismatch { at: Location::Substitution(_), .. })
    ));
    let missing = parse_instance(
        "(instance pairing-formation (subst (a (emptyV)))
           (premises (in (emptyV) (V)) (in (omegaV) (V)))
           (conclusion (in (pairV (emptyV) (omegaV)) (V))))",
    )
    .unwrap();
    assert!(matches!(
        cat().match_instance(TheoryFlavor::Czf, &missing),
        Err(MatchError::Mismatch { at: Location::Substitution(_), .. })
    ));
}

#[test]
fn small_separation_needs_a_small_proposition() {
    let src = |phi: &str| {
        alloc::format!(
            "(instance small-separation-formation (subst (a (omegaV)) (x x) (phi {phi}))
               (premises (in (omegaV) (V)) (ctx ((x (V))) (prop_s {phi})))
               (conclusion (in (sepV x (omegaV) {phi}) (V))))"
        )
    };
    let small = parse_instance(&src("(epsT (var x) (emptyV))")).unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Czf, &small), Ok(()));
    let big = parse_instance(&src("(all y (V) (epsT (var y) (var x)))")).unwrap();
    assert!(matches!(
        cat().match_instance(TheoryFlavor::Czf, &big),
        Err(MatchError::Mismatch { at: Location::Substitution(_), .. })
    ));
    // Full separation in IZF accepts it.
    let mut full = big.clone();
    full.schema = "separation-formation".to_string();
    full.premises[1].form = Form::Prop(full.premises[1].form.parts()[0].clone());
    assert_eq!(cat().match_instance(TheoryFlavor::Izf, &full), Ok(()));
}

#[test]
fn comprehension_characterization_with_substitution() {
    let inst = parse_instance(
        "(instance comprehension-characterization
           (subst (phi (epsT (var x) (omegaV))) (x x) (a (emptyV)))
           (premises (ctx ((x (V))) (prop (epsT (var x) (omegaV)))) (in (emptyV) (V)))
           (conclusion (true-in (and (imp (epsT (emptyV) (omegaV)) (epsC (emptyV) (Compr y (epsT (var y) (omegaV)))))
                                     (imp (epsC (emptyV) (Compr z (epsT (var z) (omegaV)))) (epsT (emptyV) (omegaV)))))))",
    )
    .unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Czf, &inst), Ok(()));
}

#[test]
fn capture_is_rejected() {
    // `A` may not mention the bound `x` of the rule.
    let inst = parse_instance(
        "(instance bounded-exists-characterization
           (subst (phi (bot)) (x x) (A (Compr y (epsT (var y) (var x)))))
           (premises (ctx ((x (Compr y (epsT (var y) (var x))))) (prop (bot))))
           (conclusion (true-in (bot))))",
    )
    .unwrap();
    match cat().match_instance(TheoryFlavor::Czf, &inst) {
        Err(MatchError::Mismatch { reason, .. }) => assert!(reason.contains("binds"), "{}", reason),
        other => panic!("{:?}", other),
    }
}

#[test]
fn context_extension_must_be_fresh() {
    let inst = parse_instance(
        "(instance comprehension-formation (subst (phi (bot)) (x x))
           (context ((x (V))))
           (premises (ctx ((x (V)) (x (V))) (prop (bot))))
           (conclusion (ctx ((x (V))) (col (Compr x (bot))))))",
    )
    .unwrap();
    assert!(matches!(cat().match_instance(TheoryFlavor::Czf, &inst), Err(MatchError::Mismatch { .. })));
}

#[test]
fn prop_collections_are_identified_with_props() {
    let p = "(epsT (emptyV) (omegaV))";
    let inst = parse_instance(&alloc::format!(
        "(instance prop-equality-collapse (subst (A (PropCol {p})) (B {p}))
           (premises (eqtype col (PropCol {p}) (PropCol {p})) (prop {p}) (prop (PropCol {p})))
           (conclusion (eqtype prop {p} {p})))"
    ))
    .unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Czf, &inst), Ok(()));
}

#[test]
fn instance_render_round_trip() {
    let src = "(instance pairing-formation (subst (a (emptyV)) (b (omegaV)))
           (context ((q (V))))
           (premises (ctx ((q (V))) (in (emptyV) (V))) (ctx ((q (V))) (in (omegaV) (V))))
           (conclusion (ctx ((q (V))) (in (pairV (emptyV) (omegaV)) (V)))))";
    let inst = parse_instance(src).unwrap();
    assert_eq!(cat().match_instance(TheoryFlavor::Czf, &inst), Ok(()));
    assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
}

#[test]
fn loader_rejects_bad_schemas() {
    let bad = [
        // conclusion meta absent from premises
        "(rule r (step 1) (flavors czf) (primitive) (meta (a term)) (premises) (conclusion (in (? a) (V))))",
        // undeclared meta
        "(rule r (step 1) (flavors czf) (primitive) (meta) (premises) (conclusion (in (? a) (V))))",
        // sort error
        "(rule r (step 1) (flavors czf) (primitive) (meta) (premises) (conclusion (in (V) (V))))",
        // free variable that is neither bound nor declared
        "(rule r (step 1) (flavors czf) (primitive) (meta) (premises) (conclusion (in (var q) (V))))",
        // unknown flavor
        "(rule r (step 1) (flavors hott) (primitive) (meta) (premises) (conclusion (col (V))))",
    ];
    for b in bad {
        assert!(Catalog::parse(b).is_err(), "{}", b);
    }
    let dup = "(rule r (step 1) (flavors czf) (primitive) (meta) (premises) (conclusion (col (V))))";
    assert!(Catalog::parse(&alloc::format!("{dup}\n{dup}")).is_err());
}

#[test]
fn smallness() {
    let p = |s: &str| parse_prop(s, ParseOptions::default()).unwrap();
    let _ = p;
    let eps = Prop::EpsTerm(alloc::boxed::Box::new(Term::var("x")), alloc::boxed::Box::new(Term::EmptyV));
    assert!(is_small_prop(&eps));
    let over_v = Prop::Forall(Name::new("x"), alloc::boxed::Box::new(Collection::Univ), alloc::boxed::Box::new(eps.clone()));
    assert!(!is_small_prop(&over_v));
    let over_n1 = Prop::Exists(Name::new("x"), alloc::boxed::Box::new(Collection::N1), alloc::boxed::Box::new(eps));
    assert!(is_small_prop(&over_n1));
}

fn cross(id: &str, subst: Vec<(Name, Binding)>) -> crate::hf::EquivReport {
    let c = cat();
    characterization_check(c.get(id).unwrap(), &subst, 3).unwrap()
}

#[test]
fn closed_characterizations_agree_with_eta() {
    for id in ["n0-characterization", "n1-characterization", "p1-characterization"] {
        let r = cross(id, vec![]);
        assert!(r.holds(), "{}: {:?}", id, r.counterexample);
        assert_eq!(r.skipped, 0, "{}", id);
        assert!(r.checked > 0);
    }
}

#[test]
fn parameterized_characterizations_agree_with_eta() {
    let n1 = || Binding::Node(Node::Col(Collection::N1));
    let r = cross("sum-characterization", vec![(Name::new("A"), n1()), (Name::new("B"), n1())]);
    assert!(r.holds(), "{:?}", r.counterexample);
    let r = cross(
        "sigma-characterization",
        vec![(Name::new("A"), n1()), (Name::new("B"), n1()), (Name::new("x"), Binding::Var(Name::new("x")))],
    );
    assert!(r.holds(), "{:?}", r.counterexample);
}

#[test]
fn cross_check_detects_a_wrong_characterization() {
    let wrong = Catalog::parse(
        "(rule bad (step 4) (flavors czf) (derived) (meta) (fresh z) (premises)
           (conclusion (eqtype col (N1) (Compr z (epsT (emptyV) (var z))))))",
    )
    .unwrap();
    let r = characterization_check(&wrong.rules()[0], &[], 3).unwrap();
    assert!(!r.holds());
}

#[test]
fn remaining_characterizations_agree_with_eta() {
    let n1 = || Binding::Node(Node::Col(Collection::N1));
    let x = || (Name::new("x"), Binding::Var(Name::new("x")));
    let cases: Vec<(&str, Vec<(Name, Binding)>)> = vec![
        ("pi-characterization", vec![(Name::new("A"), n1()), (Name::new("B"), n1()), x()]),
        ("list-characterization", vec![(Name::new("A"), n1())]),
        ("fun-p1-characterization", vec![(Name::new("A"), n1())]),
        ("prop-characterization", vec![(Name::new("phi"), Binding::Node(Node::Prop(Prop::Bot)))]),
    ];
    for (id, s) in cases {
        let r = cross(id, s);
        assert!(r.holds() && r.skipped == 0, "{}: {:?}", id, r.counterexample);
    }
}
