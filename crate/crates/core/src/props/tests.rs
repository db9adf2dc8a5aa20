use super::*;
use crate::emtt::Term as PreTerm;
use alloc::string::ToString;

fn cfg(seed: u64, depth: usize, samples: usize) -> GenConfig {
    GenConfig { seed, max_depth: depth, sample_count: samples, ..GenConfig::default() }
}

#[test]
fn depth_zero_formula_is_an_atom() {
    for seed in 0..50 {
        let f = gen_set_formula(&cfg(seed, 0, 1));
        assert!(
            matches!(f, Formula::Bot | Formula::Eq(..) | Formula::Mem(..)),
            "{}",
            f
        );
        if let Formula::Eq(a, b) | Formula::Mem(a, b) = &f {
            assert!(matches!(a, Term::Var(_)) && matches!(b, Term::Var(_)));
        }
    }
}

#[test]
fn deterministic_per_seed() {
    let c = cfg(11, 2, 1);
    assert_eq!(gen_set_formula(&c), gen_set_formula(&c));
    assert_eq!(gen_preterm(&c), gen_preterm(&c));
    assert_eq!(gen_prop(&c), gen_prop(&c));
    let a = check_oneside(&cfg(3, 2, 20)).unwrap();
    let b = check_oneside(&cfg(3, 2, 20)).unwrap();
    assert_eq!(a.to_string(), b.to_string());
}

#[test]
fn set_formulas_respect_depth_and_omega() {
    let c = cfg(5, 3, 1);
    let mut s = Sampler::new(&c);
    for _ in 0..500 {
        let f = s.set_formula(3);
        assert!(set_depth(&f) <= 3, "{}", f);
        assert!(f.depth() <= 3);
        assert!(!f.mentions_omega());
        assert!(f.check_well_formed().is_ok());
        assert!(f.alpha_eq(&f.normalize()));
    }
}

#[test]
fn every_formula_constructor_appears() {
    let c = cfg(1, 4, 1);
    let mut s = Sampler::new(&c);
    let mut seen = [false; 8];
    fn walk(f: &Formula, seen: &mut [bool; 8]) {
        let i = match f {
            Formula::Bot => 0,
            Formula::Eq(..) => 1,
            Formula::Mem(..) => 2,
            Formula::And(..) => 3,
            Formula::Or(..) => 4,
            Formula::Imp(..) => 5,
            Formula::Forall(..) => 6,
            Formula::Exists(..) => 7,
        };
        seen[i] = true;
        match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                walk(a, seen);
                walk(b, seen);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => walk(b, seen),
            _ => {}
        }
    }
    for _ in 0..1000 {
        walk(&s.set_formula(4), &mut seen);
    }
    assert!(seen.iter().all(|b| *b), "{:?}", seen);
}

#[test]
fn every_preterm_constructor_appears() {
    let c = GenConfig { omega_allowed: true, ..cfg(2, 3, 1) };
    let mut s = Sampler::new(&c);
    let mut tags = alloc::collections::BTreeSet::new();
    fn walk(t: &PreTerm, tags: &mut alloc::collections::BTreeSet<&'static str>) {
        tags.insert(crate::emtt::NodeRef::Term(t).tag());
        for slot in crate::emtt::NodeRef::Term(t).slots() {
            if let crate::emtt::SlotRef::Node(crate::emtt::NodeRef::Term(x)) = slot {
                walk(x, tags);
            }
        }
    }
    for _ in 0..2000 {
        walk(&s.preterm(3), &mut tags);
    }
    assert_eq!(tags.len(), 25, "{:?}", tags);
}

#[test]
fn czf_generators_stay_in_the_fragment() {
    use crate::set::is_delta0;
    use crate::set::SetNode;
    let c = GenConfig { flavor: TheoryFlavor::Czf, ..cfg(9, 3, 1) };
    let mut s = Sampler::new(&c);
    for _ in 0..300 {
        let f = s.set_formula(3);
        assert!(crate::set::flavor_check(&SetNode::Formula(f.clone()), TheoryFlavor::Czf).is_ok(), "{}", f);
        let g = s.delta0_formula(3);
        assert!(is_delta0(&SetNode::Formula(g.clone()), TheoryFlavor::Czf), "{}", g);
    }
}

#[test]
fn config_validation() {
    assert!(GenConfig::default().validate().is_ok());
    assert_eq!(GenConfig { max_depth: 6, ..GenConfig::default() }.validate(), Err(ConfigError::Depth(6)));
    assert_eq!(GenConfig { rank: 4, ..GenConfig::default() }.validate(), Err(ConfigError::Rank(4)));
    assert_eq!(GenConfig { pool: Vec::new(), ..GenConfig::default() }.validate(), Err(ConfigError::EmptyPool));
    let bad = GenConfig { pool: vec![Name::new("u")], ..GenConfig::default() };
    assert_eq!(bad.validate(), Err(ConfigError::ReservedName(Name::new("u"))));
}

#[test]
fn small_runs_pass() {
    for p in Property::ALL {
        let r = run_check(p, &cfg(7, 2, 15)).unwrap();
        assert!(r.passed(), "{}", r);
        assert!(r.checked > 0, "{}", r);
    }
}

#[test]
fn property_names_round_trip() {
    for p in Property::ALL {
        assert_eq!(Property::parse(p.as_str()), Some(p));
    }
    assert_eq!(Property::parse("nope"), None);
}

#[test]
fn report_format_is_stable() {
    let mut r = CheckReport::new(Property::Subst);
    r.samples = 2;
    r.checked = 10;
    r.failures.push(Failure {
        sample: 1,
        input: "x".into(),
        detail: "left is true, right is false".into(),
        env: Some([(Name::new("x"), crate::hf::HFSet::EMPTY)].into_iter().collect()),
    });
    assert_eq!(
        r.to_string(),
        "property: subst\nsamples: 2\nchecked: 10\nskipped: 0\nregenerated: 0\nfailures: 1\n\
         failure 1: x\n  env: x={}\n  left is true, right is false\nresult: fail\n"
    );
    let mut a = CheckReport::new(Property::Subst);
    a.samples = 3;
    a.merge(r);
    assert_eq!(a.samples, 5);
    assert_eq!(a.failures[0].sample, 1);
}

#[test]
fn ranges_concatenate_to_the_full_run() {
    for p in [Property::DeltaFun, Property::Axioms, Property::Freevars] {
        let c = cfg(4, 2, 12);
        let full = run_check(p, &c).unwrap();
        let mut parts = run_check_range(p, &c, 0..5).unwrap();
        parts.merge(run_check_range(p, &c, 5..12).unwrap());
        assert_eq!(parts, full);
    }
}
