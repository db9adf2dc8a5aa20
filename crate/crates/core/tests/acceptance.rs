//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mf_bridge_core::emtt;
use mf_bridge_core::k0::{self, K0Derivation, ObligationStatus};
use mf_bridge_core::props::{self, CheckReport, GenConfig, Sampler};
use mf_bridge_core::rules::{characterization_check, Catalog};
use mf_bridge_core::set::{self, ParseOptions, SetNode};
use mf_bridge_core::sexp::{self, Sexp};
use mf_bridge_core::{Fresh, TheoryFlavor};

const RANK: u8 = 3;
const DELTA0_CORPUS: &str = include_str!("data/delta0_corpus.txt");
const K0_CORPUS: &str = include_str!("data/k0_corpus.sexp");
const MANIFEST: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/rules_manifest.txt"));

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: String) -> Outcome {
    Outcome { ok: true, detail }
}

fn fail(detail: String) -> Outcome {
    Outcome { ok: false, detail }
}

fn cfg(samples: usize) -> GenConfig {
    GenConfig { sample_count: samples, rank: RANK, omega_allowed: false, ..GenConfig::default() }
}

fn summarize(r: &CheckReport) -> String {
    let first = r.failures.first().map(|f| format!("; first failure #{}: {} ({})", f.sample, f.input, f.detail));
    format!(
        "{} samples, {} checked, {} skipped, {} failures{}",
        r.samples,
        r.checked,
        r.skipped,
        r.failures.len(),
        first.unwrap_or_default()
    )
}

fn report_outcome(reports: &[CheckReport], elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let ok = reports.iter().all(CheckReport::passed) && limit.is_none_or(|l| elapsed < l);
    let mut detail: Vec<String> = reports.iter().map(|r| format!("{}: {}", r.property, summarize(r))).collect();
    if let Some(l) = limit {
        detail.push(format!("limit {:?}", l));
    }
    Outcome { ok, detail: detail.join(" | ") }
}

fn oneside() -> Outcome {
    let t = Instant::now();
    let c = cfg(500);
    let f = props::check_oneside_formulas(&c).expect("valid config");
    let terms = props::check_oneside_terms(&c, 200).expect("valid config");
    let mut out = report_outcome(&[f.clone(), terms.clone()], t.elapsed(), Some(Duration::from_secs(60)));
    if f.samples != 500 || terms.samples != 200 {
        out.ok = false;
        out.detail.push_str(" | wrong sample counts");
    }
    out
}

fn deltafun() -> Outcome {
    let t = Instant::now();
    let r = props::check_delta_functional(&cfg(300)).expect("valid config");
    report_outcome(&[r], t.elapsed(), Some(Duration::from_secs(60)))
}

fn subst() -> Outcome {
    let t = Instant::now();
    let r = props::check_substitution(&cfg(300)).expect("valid config");
    report_outcome(&[r], t.elapsed(), Some(Duration::from_secs(120)))
}

fn freevars() -> Outcome {
    let t = Instant::now();
    let r = props::check_freevar_contracts(&cfg(1000)).expect("valid config");
    report_outcome(&[r], t.elapsed(), None)
}

fn axioms() -> Outcome {
    let t = Instant::now();
    let reports: Vec<CheckReport> = [TheoryFlavor::Czf, TheoryFlavor::Izf, TheoryFlavor::Zf]
        .into_iter()
        .map(|flavor| props::check_axioms(&GenConfig { flavor, ..cfg(50) }).expect("valid config"))
        .collect();
    report_outcome(&reports, t.elapsed(), None)
}

fn classifier() -> Outcome {
    let mut cases = 0;
    let mut wrong = Vec::new();
    for line in DELTA0_CORPUS.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let cols: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
        let flavor = TheoryFlavor::parse(cols[0]).expect("corpus flavor");
        let node = match set::parse_node(cols[3], ParseOptions::default(), &mut Fresh::new()) {
            Ok(n) => n,
            Err(e) => {
                wrong.push(format!("{}: {}", cols[3], e));
                continue;
            }
        };
        cases += 1;
        let d0 = set::is_delta0(&node, flavor);
        let lang = set::flavor_check(&node, flavor).is_ok();
        if d0 != (cols[1] == "yes") || lang != (cols[2] == "ok") {
            wrong.push(format!("{} [{}]: delta0 {}, language {}", cols[3], flavor, d0, lang));
        }
    }
    let detail = format!("{} cases, {} disagreements{}", cases, wrong.len(), first_of(&wrong));
    if cases == 30 && wrong.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn first_of(v: &[String]) -> String {
    v.first().map(|s| format!("; first: {}", s)).unwrap_or_default()
}

fn k0_case(gamma: &str, d: &Sexp) -> Result<(), String> {
    let d = K0Derivation::from_sexp(d).map_err(|e| e.to_string())?;
    let gamma = set::parse_formula(gamma, ParseOptions::default())
        .map_err(|e| e.to_string())?
        .elaborate(&mut Fresh::new());
    let mut obligations = k0::k0_reconstruct(&d.formula(), &gamma, &d).map_err(|e| e.to_string())?;
    k0::discharge_all(&mut obligations, RANK).map_err(|e| e.to_string())?;
    for o in &obligations {
        match &o.status {
            ObligationStatus::HfVerified { rank: RANK, .. } => {}
            other => return Err(format!("obligation {}: {:?}", o.z, other)),
        }
    }
    let image = k0::sigma(&d, &obligations).map_err(|e| e.to_string())?;
    if !set::is_delta0_formula(&image.formula, TheoryFlavor::Czf) {
        return Err(format!("sigma {} is not bounded", image.formula));
    }
    let agree = k0::check_sigma_agreement(&d, &gamma, RANK).map_err(|e| e.to_string())?;
    if !agree.holds() {
        return Err(format!("sigma disagrees at {:?}", agree.counterexample));
    }
    if agree.checked == 0 {
        return Err("no environment extends the witnesses".into());
    }
    Ok(())
}

fn sigma_mapping() -> Outcome {
    let items = match sexp::parse_many(K0_CORPUS) {
        Ok(v) => v,
        Err(e) => return fail(format!("corpus: {}", e)),
    };
    let mut wrong = Vec::new();
    for item in &items {
        let parts = item.as_list().unwrap_or(&[]);
        let (name, gamma, d) = match parts {
            [Sexp::Atom(h), Sexp::Atom(n), Sexp::Str(g), d] if h == "case" => (n, g, d),
            _ => {
                wrong.push("malformed case".to_string());
                continue;
            }
        };
        if let Err(e) = k0_case(gamma, d) {
            wrong.push(format!("{}: {}", name, e));
        }
    }
    let detail = format!("{} derivations, {} rejected{}", items.len(), wrong.len(), first_of(&wrong));
    if items.len() == 10 && wrong.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn rules_audit() -> Outcome {
    let cat = Catalog::builtin();
    let rows: Vec<Vec<&str>> = MANIFEST
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('|').map(str::trim).collect())
        .collect();
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    for f in TheoryFlavor::ALL {
        let manifest = rows.iter().filter(|r| r[2].split(' ').any(|x| x == f.as_str())).count();
        let catalog = cat.list_rules(f).len();
        counts.push(format!("{} {}", f, catalog));
        if manifest != catalog {
            problems.push(format!("{}: manifest {} vs catalog {}", f, manifest, catalog));
        }
    }
    for id in ["n0-characterization", "n1-characterization", "p1-characterization"] {
        match cat.get(id).map(|s| characterization_check(s, &[], RANK)) {
            Some(Ok(r)) if r.holds() && r.skipped == 0 => {}
            Some(Ok(r)) => problems.push(format!("{}: {:?}", id, r)),
            Some(Err(e)) => problems.push(format!("{}: {}", id, e)),
            None => problems.push(format!("{}: missing", id)),
        }
    }
    let detail = format!("{}; N0, N1, P1 characterizations{}", counts.join(", "), first_of(&problems));
    if problems.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn round_trip() -> Outcome {
    const N: usize = 1000;
    let opts = ParseOptions { allow_reserved: true };
    let c = GenConfig { seed: 7, ..cfg(N) };
    let mut wrong = Vec::new();
    for i in 0..N {
        let mut s = Sampler::stream(&c, i as u64);
        let node = if i % 2 == 0 { SetNode::Formula(s.set_formula(3)) } else { SetNode::Term(s.set_term(3)) };
        let printed = node.to_string();
        match set::parse_node(&printed, opts, &mut Fresh::new()) {
            Ok(back) if back.alpha_eq(&node) => {}
            Ok(back) => wrong.push(format!("set {} reads back as {}", printed, back)),
            Err(e) => wrong.push(format!("set {}: {}", printed, e)),
        }
    }
    for i in 0..N {
        let mut s = Sampler::stream(&c, (N + i) as u64);
        let (printed, ok) = match i % 3 {
            0 => {
                let p = s.prop(3);
                let src = p.to_string();
                let ok = emtt::parse_prop(&src, opts).is_ok_and(|q| q.alpha_eq(&p));
                (src, ok)
            }
            1 => {
                let t = s.preterm(3);
                let src = t.to_string();
                let ok = emtt::parse_term(&src, opts).is_ok_and(|q| q.alpha_eq(&t));
                (src, ok)
            }
            _ => {
                let a = s.collection(3);
                let src = a.to_string();
                let ok = emtt::parse_collection(&src, opts).is_ok_and(|q| q.alpha_eq(&a));
                (src, ok)
            }
        };
        if !ok {
            wrong.push(format!("emtt {}", printed));
        }
    }
    let detail = format!("{} set and {} emTT ASTs, {} mismatches{}", N, N, wrong.len(), first_of(&wrong));
    if wrong.is_empty() {
        pass(detail)
    } else {
        fail(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("round-trip soundness", oneside),
        ("delta functionality", deltafun),
        ("substitution", subst),
        ("free-variable contract", freevars),
        ("axiom sanity", axioms),
        ("classifier corpus", classifier),
        ("sigma mapping", sigma_mapping),
        ("rules audit", rules_audit),
        ("parser round trip", round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let status = if out.ok { "PASS" } else { "FAIL" };
        if !out.ok {
            failed += 1;
        }
        println!("criterion {} {}: {} ({}) [{:.1?}]", i + 1, name, status, out.detail, t.elapsed());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
