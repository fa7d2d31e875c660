mod common;

use common::{col_oracle, dcol_oracle, random_code};
use doodle_core::assets::{d31, example_switches, unknot};
use doodle_core::presentation::{brute_force_count, dfds, fds, DEFAULT_BRUTE_FORCE_GUARD};
use doodle_core::{col, count_colorings, dcol, enumerate_switches, GaussCode};

#[test]
fn coloring_numbers_of_examples() {
    let sws = example_switches();
    assert_eq!(sws.each_ref().map(|t| col(&unknot(), t)), [4, 3, 3]);
    assert_eq!(sws.each_ref().map(|t| col(&d31(), t)), [2, 1, 1]);
    assert_eq!(dcol(&unknot(), &sws[0]), 16);
    assert_eq!(dcol(&d31(), &sws[0]), 16);
    for t in &sws {
        assert_eq!(col(&d31(), t), col_oracle(&d31(), t));
        assert_eq!(dcol(&d31(), t), dcol_oracle(&d31(), t));
    }
}

#[test]
fn mirror_curve_has_the_same_counts() {
    let mirror = GaussCode::parse("a- b- c- b a c").unwrap();
    for t in &example_switches() {
        assert_eq!(col(&mirror, t), col(&d31(), t));
        assert_eq!(dcol(&mirror, t), dcol(&d31(), t));
    }
}

#[test]
fn solver_matches_independent_brute_force() {
    let mut switches = example_switches().to_vec();
    switches.extend(enumerate_switches(3, true).unwrap());
    for seed in 0..25 {
        let d = random_code(seed, 4, 2);
        for t in &switches {
            assert_eq!(col(&d, t), col_oracle(&d, t), "{d}");
            assert_eq!(dcol(&d, t), dcol_oracle(&d, t), "{d}");
            let p = fds(&d);
            assert_eq!(
                count_colorings(&p, t),
                brute_force_count(&p, t, DEFAULT_BRUTE_FORCE_GUARD).unwrap()
            );
        }
    }
}

#[test]
fn doubled_presentation_brute_force_on_small_codes() {
    let t = &example_switches()[1];
    for seed in 100..110 {
        let d = random_code(seed, 3, 2);
        let p = dfds(&d);
        assert_eq!(
            count_colorings(&p, t),
            brute_force_count(&p, t, DEFAULT_BRUTE_FORCE_GUARD).unwrap(),
            "{d}"
        );
    }
}
