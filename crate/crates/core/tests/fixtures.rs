//! The stored example arrays: each is reproduced cell for cell, except the
//! illustrative `6 x 12` array, whose block and offsets differ from the ones
//! the general construction picks.

mod common;

use common::{fixtures, independent_heffter, load, Kind};
use heffter::blocks::b_ab;
use heffter::io::{from_csv, to_csv, to_json};
use heffter::s0k0::{place_blocks, PlacementPlan};
use heffter::verify::verify_integer_heffter;
use heffter::{construct_heffter, construct_mr, construct_sma, mr_from_sma, HeffterParams};

#[test]
fn constructors_match_stored_arrays() {
    for fx in fixtures() {
        if fx.file == "h1_t24_6x12.json" {
            continue;
        }
        let built = match &fx.kind {
            Kind::Heffter(p) => construct_heffter(p).unwrap(),
            Kind::Sma { s, k } => construct_sma(5, 10, *s, *k).unwrap(),
            Kind::Mr { s, k } => construct_mr(5, 10, *s, *k).unwrap(),
        };
        assert_eq!(built, load(fx.file), "{}", fx.file);
    }
}

#[test]
fn illustrative_placement_matches_stored_array() {
    let offsets = vec![0, 1, 10, 11, 20, 21, 30, 31, 40, 41, 50, 51];
    let g = place_blocks(6, 12, &b_ab(2, 5), &PlacementPlan::new(offsets)).unwrap();
    assert_eq!(g, load("h1_t24_6x12.json"));
    let p = HeffterParams::new(6, 12, 8, 4, 1, 24).unwrap();
    assert!(verify_integer_heffter(&g, &p).ok && independent_heffter(&g, &p));
    // Support is [1, 60] without the multiples of 5.
    let want: Vec<i64> = (1..=60).filter(|x| x % 5 != 0).collect();
    assert_eq!(g.support().into_iter().collect::<Vec<_>>(), want);
}

#[test]
fn magic_rectangle_is_the_shifted_sma() {
    let sma = load("sma_5x10.json");
    assert_eq!(mr_from_sma(&sma, 8, 4).unwrap(), load("mr_5x10.json"));
    let mr = load("mr_5x10.json");
    assert!(mr.row_sums().iter().all(|&x| x == 156));
    assert!(mr.col_sums().iter().all(|&x| x == 78));
}

#[test]
fn stored_arrays_survive_both_formats() {
    for fx in fixtures() {
        let g = load(fx.file);
        assert_eq!(from_csv(&to_csv(&g)).unwrap(), g, "{}", fx.file);
        assert_eq!(heffter::io::from_json(&to_json(&g)).unwrap(), g, "{}", fx.file);
    }
}

#[test]
fn tampered_arrays_are_rejected() {
    let p = HeffterParams::new(5, 10, 8, 4, 8, 5).unwrap();
    let g = load("h8_t5_5x10.json");
    let (r, c, v) = g.iter().next().unwrap();
    let mut bad = g.clone();
    bad.set(r, c, -v).unwrap();
    assert!(!verify_integer_heffter(&bad, &p).ok);
    assert!(!independent_heffter(&bad, &p));
}
