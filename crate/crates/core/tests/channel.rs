mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use common::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qmetapath::channel::*;
use rand::Rng;

fn geometry(n: usize, q: usize, k: usize) -> NetworkGeometry {
    NetworkGeometry {
        n_elements: n,
        n_antennas: q,
        n_users: k,
        carrier_freq: 28e9,
        element_spacing: 0.0053,
        ue_positions: (0..k).map(|i| [30.0 + 7.0 * i as f64, 40.0 - 5.0 * i as f64]).collect(),
        ris_position: [0.0, 0.0],
        ap_position: [100.0, 100.0],
        decay_const: 0.0053,
        ris_broadside: PI / 4.0,
        ap_broadside: -3.0 * PI / 4.0,
    }
}

fn unit_gains(k: usize) -> PathGains {
    PathGains {
        ue_ris: vec![1.0; k],
        ris_ap: 1.0,
    }
}

fn kappa(k: f64) -> RicianFactors {
    RicianFactors {
        ue_ris: k,
        ris_ap: k,
    }
}

/// Hand-built scalar system: one element, one antenna.
fn scalar(h_ue: Complex64, h_ap: Complex64, users: usize) -> ChannelSet {
    ChannelSet {
        h_ue_ris: vec![vec![h_ue]; users],
        h_ris_ap: vec![vec![h_ap]],
        coupling: Coupling::identity(1),
        kappa: kappa(0.0),
        gains: unit_gains(users),
        aoa_ue: vec![0.0; users],
        aod_ris: 0.0,
        aoa_ap: 0.0,
    }
}

#[test]
fn steering_vector_examples() {
    let v = steering_vector(5, 0.7);
    assert_eq!(v[0], Complex64::new(1.0, 0.0));
    assert!(steering_vector(6, 0.0).iter().all(|x| (x - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    let v = steering_vector(2, FRAC_PI_2);
    assert!((v[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn coupling_examples() {
    let mut g = geometry(3, 1, 1);
    g.decay_const = g.element_spacing;
    let c = coupling_matrix(&g).unwrap();
    for i in 0..3 {
        assert_eq!(c.matrix[i][i], 1.0);
    }
    assert!((c.matrix[0][1] - (-1.0f64).exp()).abs() < 1e-15);
    assert!((c.matrix[0][1] - 0.367879).abs() < 1e-6);
    assert!((c.matrix[0][2] - 0.135335).abs() < 1e-6);
    g.decay_const = 0.0;
    assert!(coupling_matrix(&g).is_err());
    g.decay_const = -1.0;
    assert!(coupling_matrix(&g).is_err());
}

#[test]
fn pathloss_examples() {
    let f = 28e9;
    let lambda = SPEED_OF_LIGHT / f;
    assert!((pathloss(lambda / (4.0 * PI), f) - 1.0).abs() < 1e-12);
    let ratio = pathloss(50.0, f) / pathloss(100.0, f);
    assert!((ratio - 4.0).abs() < 1e-12);
    // λ ≈ 0.010707 m; (λ / 4π·100)² ≈ 7.26e-11, about −101.4 dB
    let g = pathloss(100.0, f);
    assert!((g - 7.26e-11).abs() < 0.01e-11, "{g:e}");
}

#[test]
fn large_kappa_is_pure_line_of_sight() {
    let g = geometry(8, 4, 2);
    let beta = 2.5e-6;
    let gains = PathGains {
        ue_ris: vec![beta; 2],
        ris_ap: beta,
    };
    let chs = generate_channels(&g, kappa(1e12), &gains, 3).unwrap();
    for h in chs.h_ue_ris.iter().flatten().chain(chs.h_ris_ap.iter().flatten()) {
        assert!((h.norm() - beta.sqrt()).abs() < 1e-5 * beta.sqrt());
    }
    let los = steering_vector(8, chs.aoa_ue[0]);
    for (h, a) in chs.h_ue_ris[0].iter().zip(&los) {
        assert!((h / beta.sqrt() - a).norm() < 1e-5);
    }
}

#[test]
fn zero_kappa_entries_have_unit_power() {
    let g = geometry(100, 10, 1);
    let beta = 3.0;
    let gains = PathGains {
        ue_ris: vec![beta],
        ris_ap: beta,
    };
    // 100 draws × (100 + 1000) entries > 10⁵
    let mut sum = 0.0;
    let mut count = 0usize;
    for seed in 0..100 {
        let chs = generate_channels(&g, kappa(0.0), &gains, seed).unwrap();
        for h in chs.h_ue_ris.iter().flatten().chain(chs.h_ris_ap.iter().flatten()) {
            sum += h.norm_sqr() / beta;
            count += 1;
        }
    }
    assert!(count >= 100_000);
    let mean = sum / count as f64;
    assert!((mean - 1.0).abs() < 0.02, "{mean}");
}

#[test]
fn rician_moment_matches_beta_n() {
    let n = 16;
    let g = geometry(n, 2, 1);
    let beta = 0.5;
    let gains = PathGains {
        ue_ris: vec![beta],
        ris_ap: beta,
    };
    for k in [0.0, 1.0, 10.0] {
        let draws = 100_000 / n;
        let total: f64 = (0..draws as u64)
            .map(|seed| {
                let chs = generate_channels(&g, kappa(k), &gains, seed).unwrap();
                chs.h_ue_ris[0].iter().map(|h| h.norm_sqr()).sum::<f64>()
            })
            .sum();
        let mean = total / draws as f64;
        let want = beta * n as f64;
        assert!((mean - want).abs() < 0.02 * want, "κ={k}: {mean} vs {want}");
    }
}

#[test]
fn channels_are_seeded() {
    let g = geometry(6, 3, 2);
    let a = generate_channels(&g, kappa(10.0), &unit_gains(2), 9).unwrap();
    let b = generate_channels(&g, kappa(10.0), &unit_gains(2), 9).unwrap();
    assert_eq!(a, b);
    let c = generate_channels(&g, kappa(10.0), &unit_gains(2), 10).unwrap();
    assert_ne!(a, c);
}

#[test]
fn channel_generation_rejects_bad_input() {
    let g = geometry(4, 2, 1);
    assert!(generate_channels(&g, kappa(-1.0), &unit_gains(1), 0).is_err());
    assert!(generate_channels(&g, kappa(1.0), &unit_gains(2), 0).is_err());
    let zero = PathGains {
        ue_ris: vec![0.0],
        ris_ap: 1.0,
    };
    assert!(generate_channels(&g, kappa(1.0), &zero, 0).is_err());
}

#[test]
fn scalar_effective_channel() {
    let one = Complex64::new(1.0, 0.0);
    let chs = scalar(one, one, 1);
    let h = effective_channel(&chs, &PhaseVector::zeros(1), 0).unwrap();
    assert!((h[0] - one).norm() < 1e-15);

    let h_ue = Complex64::new(0.3, -0.7);
    let h_ap = Complex64::new(-1.1, 0.4);
    let chs = scalar(h_ue, h_ap, 1);
    let h = effective_channel(&chs, &PhaseVector::new(vec![PI]), 0).unwrap();
    assert!((h[0] + h_ap.conj() * h_ue).norm() < 1e-12);

    assert!(effective_channel(&chs, &PhaseVector::zeros(2), 0).is_err());
    assert!(effective_channel(&chs, &PhaseVector::zeros(1), 1).is_err());
}

fn dense_oracle(chs: &ChannelSet, phases: &[f64], k: usize) -> Vec<Complex64> {
    let n = chs.n_elements();
    let q = chs.n_antennas();
    let h_ap = DMatrix::from_fn(n, q, |i, j| chs.h_ris_ap[i][j]);
    let coupling = DMatrix::from_fn(n, n, |i, j| c(chs.coupling.matrix[i][j]));
    let theta = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, phases[i])
        } else {
            c(0.0)
        }
    });
    let h_ue = DVector::from_column_slice(&chs.h_ue_ris[k]);
    let out = h_ap.adjoint() * coupling * theta * h_ue;
    out.iter().copied().collect()
}

#[test]
fn effective_channel_matches_dense_products() {
    for seed in 0..40 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let q = r.gen_range(1..=4);
        let mut g = geometry(n, q, 2);
        g.decay_const = g.element_spacing * r.gen_range(0.2..3.0);
        let chs = generate_channels(&g, kappa(r.gen_range(0.0..5.0)), &unit_gains(2), seed).unwrap();
        let phases: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..TAU)).collect();
        let pv = PhaseVector::new(phases.clone());
        for k in 0..2 {
            let got = effective_channel(&chs, &pv, k).unwrap();
            assert!(max_diff(&got, &dense_oracle(&chs, &phases, k)) < 1e-12, "seed {seed}");
        }
        let mut ident = chs.clone();
        ident.coupling = Coupling::identity(n);
        let got = effective_channel(&ident, &pv, 0).unwrap();
        assert!(max_diff(&got, &dense_oracle(&ident, &phases, 0)) < 1e-12);
        let mut dense = chs.clone();
        dense.coupling = Coupling::dense(chs.coupling.matrix.clone());
        let got = effective_channel(&dense, &pv, 1).unwrap();
        assert!(max_diff(&got, &dense_oracle(&chs, &phases, 1)) < 1e-12);
    }
}

#[test]
fn sinr_examples() {
    let one = Complex64::new(1.0, 0.0);
    let single = scalar(one, one, 1);
    let zero = PhaseVector::zeros(1);
    let budget = LinkBudget::uniform(1, 1.0, 0.1).unwrap();
    assert!((sinr(&single, &zero, &budget, 0).unwrap() - 10.0).abs() < 1e-12);
    let se = spectral_efficiency(&single, &zero, &budget).unwrap();
    assert!((se - 11f64.log2()).abs() < 1e-12);
    assert!((se - 3.4594).abs() < 1e-4);

    let pair = scalar(one, one, 2);
    let budget = LinkBudget::uniform(2, 1.0, 0.1).unwrap();
    let s = sinr(&pair, &zero, &budget, 0).unwrap();
    assert!((s - 1.0 / 1.1).abs() < 1e-12);
    assert!((s - 0.9091).abs() < 1e-4);

    let faint = LinkBudget::new(vec![1e-15, 1.0], 0.1).unwrap();
    assert!(sinr(&pair, &zero, &faint, 0).unwrap() < 1e-13);

    let dead = scalar(Complex64::new(0.0, 0.0), one, 2);
    assert_eq!(spectral_efficiency(&dead, &zero, &budget).unwrap(), 0.0);
}

#[test]
fn se_is_monotone_in_own_power() {
    let g = geometry(8, 4, 3);
    let chs = generate_channels(&g, kappa(2.0), &unit_gains(3), 1).unwrap();
    let pv = PhaseVector::new(vec![0.3; 8]);
    let mut last = 0.0;
    for p in [0.01, 0.1, 1.0, 10.0] {
        let budget = LinkBudget::new(vec![p, 1.0, 1.0], 0.5).unwrap();
        let own = (1.0 + sinr(&chs, &pv, &budget, 0).unwrap()).log2();
        assert!(own >= last);
        last = own;
    }
}

#[test]
fn energy_and_objective_examples() {
    assert_eq!(energy_cost(&PhaseVector::zeros(5)), 0.0);
    assert!((energy_cost(&PhaseVector::new(vec![PI; 4])) - 2.0).abs() < 1e-15);
    assert!((energy_cost(&PhaseVector::new(vec![0.0, PI])) - 1.0).abs() < 1e-15);

    let one = Complex64::new(1.0, 0.0);
    let single = scalar(one, one, 1);
    let budget = LinkBudget::uniform(1, 1.0, 0.1).unwrap();
    let zero = PhaseVector::zeros(1);
    let se = spectral_efficiency(&single, &zero, &budget).unwrap();
    let only_se = ObjectiveWeights {
        alpha1: 1.0,
        alpha2: 0.0,
    };
    assert_eq!(objective(&single, &zero, &budget, only_se).unwrap(), se);
    let only_energy = ObjectiveWeights {
        alpha1: 0.0,
        alpha2: 1.0,
    };
    let pi = PhaseVector::new(vec![PI]);
    assert!((objective(&single, &pi, &budget, only_energy).unwrap() + 2.0).abs() < 1e-15);
    let f = objective(&single, &zero, &budget, ObjectiveWeights::default()).unwrap();
    assert!((f - 11f64.log2()).abs() < 1e-12);
}

#[test]
fn dbm_conversion() {
    assert!((dbm_to_watts(10.0) - 0.01).abs() < 1e-15);
    assert!((dbm_to_watts(-90.0) - 1e-12).abs() < 1e-24);
    assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-12);
}

#[test]
fn csi_error_statistics() {
    let g = geometry(100, 100, 1);
    let beta = 4.0;
    let gains = PathGains {
        ue_ris: vec![beta],
        ris_ap: beta,
    };
    let chs = generate_channels(&g, kappa(3.0), &gains, 2).unwrap();
    assert_eq!(inject_csi_error(&chs, 0.0, 1).unwrap(), chs);

    let var = 0.1;
    let noisy = inject_csi_error(&chs, var, 1).unwrap();
    assert_eq!(noisy, inject_csi_error(&chs, var, 1).unwrap());
    let diffs: Vec<f64> = noisy
        .h_ris_ap
        .iter()
        .flatten()
        .zip(chs.h_ris_ap.iter().flatten())
        .map(|(a, b)| (a - b).norm_sqr() / beta)
        .collect();
    assert!(diffs.len() >= 10_000);
    let sample = diffs.iter().sum::<f64>() / diffs.len() as f64;
    assert!((sample - var).abs() < 0.02 * var, "{sample}");
    assert!(inject_csi_error(&chs, -0.1, 1).is_err());
}

#[test]
fn quantization_examples() {
    let q = quantize_phases(&PhaseVector::new(vec![PI / 3.0]), 2).unwrap();
    assert!((q.as_slice()[0] - FRAC_PI_2).abs() < 1e-15);
    let q = quantize_phases(&PhaseVector::new(vec![3.0]), 1).unwrap();
    assert!((q.as_slice()[0] - PI).abs() < 1e-15);
    let grid: Vec<f64> = (0..8).map(|i| i as f64 * TAU / 8.0).collect();
    let q = quantize_phases(&PhaseVector::new(grid.clone()), 3).unwrap();
    assert_eq!(q.as_slice(), grid.as_slice());
    let q = quantize_phases(&PhaseVector::new(vec![TAU - 1e-9]), 2).unwrap();
    assert_eq!(q.as_slice()[0], 0.0);
    assert_eq!(q.bit_depth(), Some(2));
}

#[test]
fn channel_set_json_round_trip() {
    let g = geometry(5, 3, 2);
    let chs = generate_channels(&g, kappa(4.0), &unit_gains(2), 8).unwrap();
    let back = ChannelSet::from_json(&chs.to_json().unwrap()).unwrap();
    assert_eq!(chs, back);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("channels.json");
    chs.save(&path).unwrap();
    assert_eq!(ChannelSet::load(&path).unwrap(), chs);
    assert!(ChannelSet::load(dir.path().join("missing.json")).is_err());
}

proptest! {
    #[test]
    fn quantization_error_is_bounded(phi in 0.0..TAU, bits in 1u32..=6) {
        let q = quantize_phases(&PhaseVector::new(vec![phi]), bits).unwrap();
        let err = circular_distance(phi, q.as_slice()[0]);
        prop_assert!(err <= quantization_bound(bits) + 1e-12);
        let level = q.as_slice()[0] / (TAU / (1u64 << bits) as f64);
        prop_assert!((level - level.round()).abs() < 1e-9);
    }

    #[test]
    fn coupling_is_symmetric_with_unit_diagonal(
        n in 1usize..12,
        spacing in 1e-4..0.1f64,
        ratio in 0.05..20.0f64,
    ) {
        let mut g = geometry(n, 1, 1);
        g.element_spacing = spacing;
        g.decay_const = spacing * ratio;
        let c = coupling_matrix(&g).unwrap();
        for i in 0..n {
            prop_assert_eq!(c.matrix[i][i], 1.0);
            for j in 0..n {
                prop_assert_eq!(c.matrix[i][j], c.matrix[j][i]);
                prop_assert!(c.matrix[i][j] > 0.0 && c.matrix[i][j] <= 1.0);
            }
        }
    }

    #[test]
    fn full_turns_leave_channel_unchanged(
        phases in proptest::collection::vec(0.0..TAU, 6),
        turns in proptest::collection::vec(-3i32..=3, 6),
    ) {
        let g = geometry(6, 3, 1);
        let chs = generate_channels(&g, kappa(2.0), &unit_gains(1), 4).unwrap();
        let shifted: Vec<f64> = phases.iter().zip(&turns).map(|(p, t)| p + TAU * *t as f64).collect();
        let a = effective_channel(&chs, &PhaseVector::new(phases), 0).unwrap();
        let b = effective_channel(&chs, &PhaseVector::new(shifted), 0).unwrap();
        prop_assert!(max_diff(&a, &b) < 1e-12);
    }

    #[test]
    fn phase_vectors_stay_in_range(phases in proptest::collection::vec(-50.0..50.0f64, 1..20)) {
        let pv = PhaseVector::new(phases);
        prop_assert!(pv.as_slice().iter().all(|p| (0.0..TAU).contains(p)));
    }
}
