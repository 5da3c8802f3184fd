//! Deterministic synthetic datasets shaped like three kinds of real
//! measurement campaigns: absorbance spectra over a concentration series,
//! Raman spectra from two bioreactor runs, and battery-cell discharge
//! curves with cycle-life targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{AxisUnit, Dataset, FeatureAxis, TargetTransform};
use crate::data::DataMatrix;
use crate::preprocessing::{moving_median_outlier_filter, restrict_feature_range};

pub const STANDIN_NAMES: [&str; 3] = ["ftir-like", "raman-like", "lfp-like"];

pub fn builtin_standins() -> Vec<Dataset> {
    vec![ftir_like(), raman_like(), lfp_like()]
}

pub fn builtin_standin(name: &str) -> Option<Dataset> {
    match name {
        "ftir-like" => Some(ftir_like()),
        "raman-like" => Some(raman_like()),
        "lfp-like" => Some(lfp_like()),
        _ => None,
    }
}

fn gaussian(x: f64, center: f64, width: f64) -> f64 {
    let z = (x - center) / width;
    (-0.5 * z * z).exp()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn build(name: &str, rows: Vec<Vec<f64>>, raw: Vec<f64>, groups: Vec<String>, axis: FeatureAxis, t: TargetTransform, provenance: &str) -> Dataset {
    let x = DataMatrix::from_rows(&rows).expect("stand-in rows are finite and rectangular");
    Dataset::new(name, x, raw, groups, axis, t)
        .expect("stand-in is internally consistent")
        .with_provenance(provenance)
}

/// Label used for the concentration group `c` of [`ftir_like`].
pub fn ftir_group_label(c: f64) -> String {
    format!("C={c:.3}")
}

/// 60 absorbance spectra, 10 for each of six equally spaced concentrations
/// 0.012..0.022. Peak heights saturate with concentration and one band
/// gains extra intensity only above 0.021, every group carries its own
/// offset and shape nuisance (so spectra vary more between groups than
/// within), a water band varies within groups, and the `C=0.014` group
/// reads systematically high.
pub fn ftir_like() -> Dataset {
    const SEED: u64 = 0x00F7_1A00;
    const PER_GROUP: usize = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let axis: Vec<f64> = (0..=300).map(|k| 800.0 + 4.0 * k as f64).collect();
    let concentrations: Vec<f64> = (0..6).map(|k| 0.012 + 0.002 * k as f64).collect();

    // analyte bands: (center, width, saturation scale)
    let bands = [(1040.0, 18.0, 0.018), (1105.0, 25.0, 0.030), (1230.0, 30.0, 0.022), (1415.0, 20.0, 0.040)];
    // the first band picks up extra intensity just below the top concentration
    let (onset_c, onset_w) = (0.021, 0.0003);
    let absorbance = |c: f64, wn: f64| -> f64 {
        let z = (c - onset_c) / onset_w;
        let excess = onset_w * (z.max(0.0) + (-z.abs()).exp().ln_1p());
        bands
            .iter()
            .map(|&(center, width, sat)| sat * (1.0 - (-c / sat).exp()) * gaussian(wn, center, width))
            .sum::<f64>()
            + excess * gaussian(wn, 1040.0, 18.0)
    };

    let mut rows = Vec::new();
    let mut raw = Vec::new();
    let mut groups = Vec::new();
    for &c in &concentrations {
        let label = ftir_group_label(c);
        let biased = label == "C=0.014";
        let g_offset = 5e-6 * normal(&mut rng);
        let g_tilt = 5e-6 * normal(&mut rng);
        let g_shape = [5e-6 * normal(&mut rng), 5e-6 * normal(&mut rng)];
        for _ in 0..PER_GROUP {
            let water = 4e-4 * (1.0 + 0.5 * normal(&mut rng));
            let offset = 2e-5 * normal(&mut rng);
            let apparent_c = if biased { c * 1.003 } else { c };
            let row: Vec<f64> = axis
                .iter()
                .map(|&wn| {
                    let u = (wn - 1400.0) / 600.0;
                    absorbance(apparent_c, wn)
                        + g_offset
                        + g_tilt * u
                        + g_shape[0] * gaussian(wn, 1150.0, 120.0)
                        + g_shape[1] * gaussian(wn, 1600.0, 90.0)
                        + water * gaussian(wn, 1640.0, 45.0)
                        + offset
                        + 2e-6 * normal(&mut rng)
                })
                .collect();
            rows.push(row);
            raw.push(c);
            groups.push(label.clone());
        }
    }
    build(
        "ftir-like",
        rows,
        raw,
        groups,
        FeatureAxis {
            values: axis,
            unit: AxisUnit::Wavenumber,
        },
        TargetTransform::Identity,
        "synthetic absorbance spectra, six concentration groups, one biased group",
    )
}

/// Two bioreactor runs of Raman spectra. Glucose is sampled once a day,
/// cleaned with a 3-day moving-median filter at 3σ and then linearly
/// interpolated to the spectrum timestamps. Spectra are generated on
/// 200..2000 cm⁻¹ and cropped to 400..1800.
pub fn raman_like() -> Dataset {
    const SEED: u64 = 0x004A_3A00;
    const DAYS: usize = 20;
    const SPECTRA_PER_DAY: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let full_axis: Vec<f64> = (0..=900).map(|k| 200.0 + 2.0 * k as f64).collect();

    let mut rows = Vec::new();
    let mut raw = Vec::new();
    let mut groups = Vec::new();
    for (run, start_level) in [("run-1", 8.0), ("run-2", 6.5)] {
        // daily offline glucose measurements, one gross error mid-run
        let days: Vec<f64> = (0..=DAYS).map(|d| d as f64).collect();
        let mut glucose: Vec<f64> = days
            .iter()
            .map(|&t| start_level - 0.25 * t + 1.5 * (t / 3.0).sin() * 0.3 + 0.05 * normal(&mut rng))
            .collect();
        glucose[DAYS / 2] += 4.0;
        let cleaned = moving_median_outlier_filter(&glucose, &days, 3.0, 3.0).expect("valid filter input");

        let cell_phase = rng.random_range(0.0..1.0);
        for s in 0..(DAYS * SPECTRA_PER_DAY) {
            let t = s as f64 / SPECTRA_PER_DAY as f64 + 0.1;
            let g = interpolate(&cleaned.kept_timestamps, &cleaned.kept_values, t);
            let biomass = 1.0 / (1.0 + (-(t - 8.0 - cell_phase) / 2.0).exp());
            let fluorescence = 0.5 + 0.02 * t;
            let drift = 1.0 + 0.002 * t;
            let row: Vec<f64> = full_axis
                .iter()
                .map(|&v| {
                    let u = v / 2000.0;
                    g * (0.08 * gaussian(v, 1125.0 * drift, 12.0) + 0.05 * gaussian(v, 1060.0, 10.0) + 0.04 * gaussian(v, 520.0, 14.0))
                        + biomass * (0.6 * gaussian(v, 1450.0, 20.0) + 0.4 * gaussian(v, 1660.0, 25.0) + 0.3 * gaussian(v, 1003.0, 6.0))
                        + fluorescence * (1.0 - 0.6 * u) * u
                        + 0.004 * normal(&mut rng)
                })
                .collect();
            rows.push(row);
            raw.push(g);
            groups.push(run.to_string());
        }
    }
    let full = DataMatrix::from_rows(&rows).expect("finite rows");
    let (cropped, axis) = restrict_feature_range(&full, &full_axis, 400.0, 1800.0).expect("range inside axis");
    let rows: Vec<Vec<f64>> = (0..cropped.nrows()).map(|i| cropped.row_vec(i)).collect();
    build(
        "raman-like",
        rows,
        raw,
        groups,
        FeatureAxis {
            values: axis,
            unit: AxisUnit::RamanShift,
        },
        TargetTransform::Identity,
        "synthetic Raman spectra, two runs, glucose interpolated from filtered daily samples",
    )
}

fn interpolate(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    if t <= ts[0] {
        return vs[0];
    }
    for k in 1..ts.len() {
        if t <= ts[k] {
            let f = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
            return vs[k - 1] * (1.0 - f) + vs[k] * f;
        }
    }
    vs[vs.len() - 1]
}

/// Protocol group sizes for the 124 cells, ranging from 1 to 9.
fn lfp_group_sizes() -> Vec<usize> {
    let pattern = [1, 4, 9, 2, 6, 3, 8, 5, 7, 1, 3, 2];
    let mut sizes = Vec::new();
    let mut total = 0;
    for &s in pattern.iter().cycle() {
        if total + s > 124 {
            sizes.push(124 - total);
            break;
        }
        sizes.push(s);
        total += s;
        if total == 124 {
            break;
        }
    }
    sizes.retain(|&s| s > 0);
    sizes
}

/// 124 discharge-capacity difference curves on a 1100-point voltage axis
/// (2.0..3.6 V). Cells sharing a charging protocol form a group. Cycle life
/// is right-skewed and the model target is its base-10 logarithm; the curve
/// amplitude around the voltage plateaus tracks log cycle life, a bump near
/// 3 V varies independently of it.
pub fn lfp_like() -> Dataset {
    const SEED: u64 = 0x00BA_7700;
    const N_POINTS: usize = 1100;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let axis: Vec<f64> = (0..N_POINTS).map(|k| 2.0 + 1.6 * k as f64 / (N_POINTS - 1) as f64).collect();

    let mut rows = Vec::new();
    let mut raw = Vec::new();
    let mut groups = Vec::new();
    for (p, size) in lfp_group_sizes().into_iter().enumerate() {
        let label = format!("protocol-{:02}", p + 1);
        let long_lived = rng.random_bool(0.2);
        let protocol_log_life = if long_lived { 3.25 } else { 2.72 } + 0.08 * normal(&mut rng);
        let protocol_bump = 0.01 * normal(&mut rng);
        for _ in 0..size {
            let log_life = protocol_log_life + 0.04 * normal(&mut rng);
            let life = 10f64.powf(log_life).round();
            let severity = 3.4 - life.log10();
            let bump = protocol_bump + 0.004 * normal(&mut rng);
            let wobble = 0.002 * normal(&mut rng);
            let row: Vec<f64> = axis
                .iter()
                .map(|&v| {
                    -severity * (0.03 * gaussian(v, 3.22, 0.04) + 0.018 * gaussian(v, 3.36, 0.03))
                        + bump * gaussian(v, 3.0, 0.05)
                        + wobble * (v - 2.8)
                        + 2e-4 * normal(&mut rng)
                })
                .collect();
            rows.push(row);
            raw.push(life);
            groups.push(label.clone());
        }
    }
    build(
        "lfp-like",
        rows,
        raw,
        groups,
        FeatureAxis {
            values: axis,
            unit: AxisUnit::Voltage,
        },
        TargetTransform::Log10,
        "synthetic discharge-capacity difference curves, 124 cells, log cycle-life target",
    )
}
