use mf_bridge_core::rules::Catalog;
use mf_bridge_core::TheoryFlavor;

const MANIFEST: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/rules_manifest.txt"));

#[test]
fn catalog_matches_manifest() {
    let rows: Vec<Vec<&str>> = MANIFEST
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('|').map(str::trim).collect())
        .collect();
    let cat = Catalog::builtin();
    assert_eq!(rows.len(), cat.rules().len());
    for (row, rule) in rows.iter().zip(cat.rules()) {
        assert_eq!(row[0], rule.id);
        assert_eq!(row[1], rule.step.to_string(), "{}", rule.id);
        let flavors: Vec<&str> = rule.flavors.iter().map(|f| f.as_str()).collect();
        assert_eq!(row[2], flavors.join(" "), "{}", rule.id);
        assert_eq!(row[3], if rule.derived { "derived" } else { "primitive" }, "{}", rule.id);
    }
    for (f, n) in [(TheoryFlavor::Czf, 65), (TheoryFlavor::Izf, 66), (TheoryFlavor::Zf, 67)] {
        let in_manifest = rows.iter().filter(|r| r[2].split(' ').any(|x| x == f.as_str())).count();
        assert_eq!(in_manifest, n);
        assert_eq!(cat.list_rules(f).len(), n);
    }
}
