#![allow(dead_code)]

use lyshift::criteria::{
    analyze_bilateral_shift_general, analyze_bilateral_shift_nonzero, analyze_c0_discrete, analyze_composition_discrete,
    analyze_kothe, replay_shift, AnalysisConfig, Status, Verdict,
};
use lyshift::operators::DiscreteSystem;
use lyshift::scalar::{int, ratio, Rational};
use lyshift::spaces::{KotheMatrix, SpaceSpec};
use lyshift::weights::{BlockGenerator, IndexDomain, WeightForm, WeightSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VALUES: [(i64, i64); 5] = [(1, 3), (1, 2), (1, 1), (2, 1), (3, 1)];

pub fn small_value(rng: &mut ChaCha8Rng) -> Rational {
    let (n, d) = VALUES[rng.gen_range(0..VALUES.len())];
    ratio(n, d)
}

pub fn random_periodic(rng: &mut ChaCha8Rng) -> WeightForm {
    let len = rng.gen_range(1..=6);
    WeightForm::Periodic {
        values: (0..len).map(|_| small_value(rng)).collect(),
        offset: rng.gen_range(-3..=3),
    }
}

/// Bilateral nonzero weights: every third spec pairs a periodic left half
/// with halving/doubling runs to the right.
pub fn random_bilateral(seed: u64) -> WeightSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = if seed % 3 == 2 {
        let r = if rng.gen_bool(0.5) { int(2) } else { int(3) };
        WeightForm::piecewise(1, random_periodic(&mut rng), WeightForm::Block { generator: BlockGenerator::HalfDoubleRuns { ratio: r }, start: 1 })
    } else {
        random_periodic(&mut rng)
    };
    WeightSpec::new(IndexDomain::Bilateral, form).unwrap()
}

pub fn quick_cfg() -> AnalysisConfig {
    AnalysisConfig { levels: 8, horizon: 2048, k_cap: 3, l_cap: 3, window: Some((-4096, 4096)), ..AnalysisConfig::default() }
}

pub fn l2z() -> SpaceSpec {
    SpaceSpec::lp(IndexDomain::Bilateral, 2.0)
}

pub fn c0z() -> SpaceSpec {
    SpaceSpec::c0(IndexDomain::Bilateral)
}

/// Multiplies every weight by a sign pattern of period 3.
pub fn twisted(w: &WeightSpec) -> WeightSpec {
    let signs = WeightForm::periodic(vec![int(-1), int(1), int(-1)]);
    WeightSpec::new(w.domain, WeightForm::Product { left: Box::new(w.form.clone()), right: Box::new(signs) }).unwrap()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

pub fn check_soundness(w: &WeightSpec, v: &Verdict, cfg: &AnalysisConfig) -> Result<(), String> {
    if v.status != Status::ChaoticCertified {
        return Ok(());
    }
    let cert = v.certificate.as_ref().ok_or("certified verdict without certificate")?;
    replay_shift(w, cert, cfg.eps).map_err(|e| e.to_string())
}

pub fn check_unimodular(w: &WeightSpec, cfg: &AnalysisConfig) -> Result<(), String> {
    let a = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    let b = analyze_bilateral_shift_nonzero(&twisted(w), &l2z(), cfg).map_err(|e| e.to_string())?;
    if a.status != b.status || json(&a.certificate) != json(&b.certificate) || json(&a.refutation) != json(&b.refutation) {
        return Err(format!("{:?} vs {:?} after sign twist", a.status, b.status));
    }
    Ok(())
}

pub fn check_dispatch(w: &WeightSpec, cfg: &AnalysisConfig) -> Result<(), String> {
    let a = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    let b = analyze_bilateral_shift_general(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    if json(&a) != json(&b) {
        return Err("general analyzer differs from the nonzero analyzer".into());
    }
    Ok(())
}

pub fn check_kothe_reduction(w: &WeightSpec, cfg: &AnalysisConfig) -> Result<(), String> {
    let a = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    let b = analyze_kothe(w, &KotheMatrix::Constant { value: int(1) }, 2.0, cfg).map_err(|e| e.to_string())?;
    if a.status != b.status {
        return Err(format!("lp {:?} vs constant Köthe {:?}", a.status, b.status));
    }
    let idx = |v: &Verdict| v.certificate.as_ref().map(|c| c.levels.iter().map(|l| (l.s, l.i, l.j)).collect::<Vec<_>>());
    if idx(&a) != idx(&b) {
        return Err("certificate indices differ".into());
    }
    Ok(())
}

pub fn check_coherence(w: &WeightSpec, cfg: &AnalysisConfig) -> Result<(), String> {
    let window = (-(cfg.horizon as i64), cfg.horizon as i64);
    let sys = DiscreteSystem::from_shift(w, window, 2.0).map_err(|e| e.to_string())?;
    let lp = analyze_composition_discrete(&sys, None, cfg).map_err(|e| e.to_string())?;
    let c0 = analyze_c0_discrete(&sys, None, cfg).map_err(|e| e.to_string())?;
    let s2 = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    let s0 = analyze_bilateral_shift_nonzero(w, &c0z(), cfg).map_err(|e| e.to_string())?;
    if lp.status != s2.status || c0.status != s0.status || s0.status != s2.status {
        return Err(format!("composition lp {:?} / c0 {:?}, shift lp {:?} / c0 {:?}", lp.status, c0.status, s2.status, s0.status));
    }
    Ok(())
}

pub fn check_determinism(w: &WeightSpec, cfg: &AnalysisConfig) -> Result<(), String> {
    let a = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    let b = analyze_bilateral_shift_nonzero(w, &l2z(), cfg).map_err(|e| e.to_string())?;
    if json(&a) != json(&b) {
        return Err("repeated runs differ".into());
    }
    Ok(())
}
