mod common;

use common::*;
use lyshift::criteria::analyze_bilateral_shift_nonzero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn certificates_replay(seed in any::<u64>()) {
        let w = random_bilateral(seed);
        let cfg = quick_cfg();
        let v = analyze_bilateral_shift_nonzero(&w, &l2z(), &cfg).unwrap();
        prop_assert_eq!(check_soundness(&w, &v, &cfg), Ok(()));
    }

    #[test]
    fn verdicts_depend_only_on_moduli(seed in any::<u64>()) {
        prop_assert_eq!(check_unimodular(&random_bilateral(seed), &quick_cfg()), Ok(()));
    }

    #[test]
    fn general_analyzer_delegates(seed in any::<u64>()) {
        prop_assert_eq!(check_dispatch(&random_bilateral(seed), &quick_cfg()), Ok(()));
    }

    #[test]
    fn constant_kothe_matrix_is_lp(seed in any::<u64>()) {
        prop_assert_eq!(check_kothe_reduction(&random_bilateral(seed), &quick_cfg()), Ok(()));
    }

    #[test]
    fn composition_and_shift_analyzers_agree(seed in any::<u64>()) {
        prop_assert_eq!(check_coherence(&random_bilateral(seed), &quick_cfg()), Ok(()));
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        prop_assert_eq!(check_determinism(&random_bilateral(seed), &quick_cfg()), Ok(()));
    }
}
