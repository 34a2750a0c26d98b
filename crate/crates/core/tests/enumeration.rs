use std::sync::OnceLock;

use fano_index2::classifier::{enumerate, summarize, Candidate, CandidateRecord, Enumeration};
use fano_index2::genrings::{codim_histogram, embedded_tables, K3_COMPARISON_CODIM_COUNTS};
use fano_index2::rr::polarisation_residual;

fn full() -> &'static Enumeration {
    static ALL: OnceLock<Enumeration> = OnceLock::new();
    ALL.get_or_init(|| enumerate(60))
}

#[test]
fn every_admissible_basket_polarises() {
    let e = full();
    assert_eq!(e.baskets_considered, 1032);
    assert!(e.discarded.is_empty());
    assert!(e.candidates.iter().all(|c| polarisation_residual(&c.basket).is_zero()));
}

#[test]
fn series_are_pairwise_distinct() {
    assert_eq!(summarize(&full().candidates).distinct_series, 1492);
}

#[test]
fn enumeration_order_is_canonical() {
    let keys: Vec<_> = full().candidates.iter().map(|c| (c.basket.clone(), c.genus)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(enumerate(60).candidates, full().candidates);
}

#[test]
fn records_round_trip_through_json() {
    for c in &full().candidates {
        let json = serde_json::to_string(c).unwrap();
        let back: Candidate = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, c);
        assert_eq!(
            CandidateRecord::from(c).csv_fields().len(),
            CandidateRecord::COLUMNS.len()
        );
    }
}

#[test]
fn every_table_entry_is_a_candidate() {
    let all = &full().candidates;
    for e in embedded_tables() {
        let c = all
            .iter()
            .find(|c| c.basket == e.basket && c.genus == e.genus())
            .unwrap_or_else(|| panic!("{} {:?} missing", e.name, e.weights));
        assert_eq!(c.a3, e.a3, "{}", e.name);
        assert!(c.is_stable() && !c.k3_obstructed, "{}", e.name);
    }
}

#[test]
fn codim_estimates_in_low_codimension() {
    let h = codim_histogram(&full().candidates, 60);
    assert!(h.failures.is_empty());
    let total: usize = h.rows.iter().map(|r| r.total).sum();
    let reference: usize = K3_COMPARISON_CODIM_COUNTS.iter().map(|r| r.1).sum();
    assert_eq!(total, reference);
    for &(codim, count, unstable) in &K3_COMPARISON_CODIM_COUNTS[..3] {
        let row = h.rows.iter().find(|r| r.codim == codim).unwrap();
        assert_eq!((row.total, row.unstable), (count, unstable), "codim {codim}");
    }
    // codimension 4 overestimates: every tabulated codim 4 ring is found,
    // alongside series the K3 comparison places higher
    let four = h.rows.iter().find(|r| r.codim == 4).unwrap();
    assert!(four.total >= K3_COMPARISON_CODIM_COUNTS[3].1);
}
