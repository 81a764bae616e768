use cca_core::enumerate::{enumerate_connection_sets, unit_system, Base, EnumerationOptions, EnumerationReport, Mode};
use cca_core::structure::canonical_sets;

fn run(base: Base, mode: Mode, jobs: usize) -> EnumerationReport {
    enumerate_connection_sets(base, EnumerationOptions { mode, jobs }).unwrap()
}

fn orbit_sizes(r: &EnumerationReport) -> Vec<u64> {
    r.non_cca_classes.iter().map(|c| c.orbit_size).collect()
}

#[test]
fn f21_frozen_counts() {
    let r = run(Base::F21, Mode::Canonical, 0);
    assert_eq!((r.units, r.scanned, r.connected_count, r.connected_classes), (10, 1024, 1009, 51));
    assert_eq!(r.non_cca_classes.len(), 1);
    let class = &r.non_cca_classes[0];
    assert_eq!(class.representative, ["y^2", "y^2*x^2", "y^4", "y^4*x^6"]);
    assert_eq!((class.orbit_size, class.autc_order), (21, 168));
}

#[test]
fn f21xz2_frozen_counts() {
    let r = run(Base::F21xz2, Mode::Canonical, 0);
    assert_eq!((r.units, r.scanned, r.connected_count, r.connected_classes), (21, 1 << 21, 2_095_973, 55_575));
    assert_eq!(orbit_sizes(&r), [21, 42, 42, 42, 42, 21, 42, 21, 42, 21, 21]);
    assert!(r.non_cca_classes.iter().all(|c| c.autc_order == 336));
    let family = r.family.unwrap();
    assert_eq!(family.family_classes, 11);
    assert!(family.every_class_in_family);
}

#[test]
fn agl17_frozen_counts() {
    let r = run(Base::Agl17, Mode::Canonical, 0);
    assert_eq!((r.units, r.scanned, r.connected_count, r.connected_classes), (24, 1 << 24, 16_775_141, 405_199));
    assert_eq!(orbit_sizes(&r), [42, 21]);
    assert!(r.non_cca_classes.iter().all(|c| c.autc_order == 336));
    let c = canonical_sets().unwrap();
    let units = unit_system(Base::Agl17).unwrap();
    let masks: Vec<u32> = r.non_cca_classes.iter().map(|k| k.mask).collect();
    assert_eq!(masks[0], units.canonical(units.mask_of(&c.s42_1).unwrap()));
    assert_eq!(masks[1], units.canonical(units.mask_of(&c.s42_2).unwrap()));
}

#[test]
fn full_and_pruned_agree_on_f21() {
    let full = run(Base::F21, Mode::Full, 0);
    let pruned = run(Base::F21, Mode::Canonical, 0);
    assert_eq!(full.non_cca_classes, pruned.non_cca_classes);
    assert_eq!(full.connected_count, pruned.connected_count);
    assert_eq!(full.connected_classes, pruned.connected_classes);
}

#[test]
fn full_and_pruned_agree_on_f21xz2() {
    let full = run(Base::F21xz2, Mode::Full, 0);
    let pruned = run(Base::F21xz2, Mode::Canonical, 0);
    assert_eq!(full.non_cca_classes, pruned.non_cca_classes);
    assert_eq!(full.connected_count, pruned.connected_count);
    assert_eq!(full.connected_classes, pruned.connected_classes);
    assert_eq!(full.family, pruned.family);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let one = run(Base::F21xz2, Mode::Canonical, 1);
    let three = run(Base::F21xz2, Mode::Canonical, 3);
    assert_eq!(one.to_json(), three.to_json());
    assert_eq!(one.to_csv(), three.to_csv());
}

#[test]
fn report_formats() {
    let r = run(Base::F21, Mode::Canonical, 0);
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["base"], "f21");
    assert_eq!(json["scanned"], 1024);
    assert_eq!(json["non_cca_classes"][0]["orbit_size"], 21);
    assert_eq!(json["non_cca_classes"][0]["autc_order"], 168);
    assert!(json.get("family").is_none());
    assert_eq!(r.to_csv(), "representative,orbit_size,autc_order\ny^2 y^2*x^2 y^4 y^4*x^6,21,168\n");
}

#[test]
fn every_unit_system_partitions_its_masks() {
    for base in [Base::F21, Base::F21xz2] {
        let u = unit_system(base).unwrap();
        let total: u64 = (0..u.subset_count() as u32).filter(|&m| u.is_canonical(m)).map(|m| u.orbit_size(m)).sum();
        assert_eq!(total, u.subset_count());
    }
}
