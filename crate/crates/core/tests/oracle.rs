//! Brute-force oracle over the Bloch sphere for qubit `A`, built from raw
//! matrices so it shares no code with the optimizer or the measure code.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use qdiscord::measures::{discord, geometric_discord, geometric_discord_qubit_closed_form, ChannelClass};
use qdiscord::optimize::OptConfig;
use qdiscord::states::{bell_state, example_post_channel_state, random_state};
use qdiscord::BipartiteState;

type M = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn projector_pair(theta: f64, phi: f64) -> [M; 2] {
    let (x, y, z) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    let plus = M::from_row_slice(2, 2, &[c(1.0 + z, 0.0), c(x, -y), c(x, y), c(1.0 - z, 0.0)]) * c(0.5, 0.0);
    let minus = M::identity(2, 2) - &plus;
    [plus, minus]
}

fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

fn dephase(rho: &M, d_b: usize, theta: f64, phi: f64) -> M {
    let id = M::identity(d_b, d_b);
    projector_pair(theta, phi).iter().fold(M::zeros(rho.nrows(), rho.ncols()), |acc, p| {
        let big = kron(p, &id);
        acc + &big * rho * &big
    })
}

fn entropy(rho: &M) -> f64 {
    let h = (rho + rho.adjoint()) * c(0.5, 0.0);
    h.symmetric_eigenvalues().iter().filter(|&&l| l > 1e-15).map(|&l| -l * l.log2()).sum()
}

fn trace_out_a(rho: &M, d_b: usize) -> M {
    M::from_fn(d_b, d_b, |i, j| (0..2).map(|a| rho[(a * d_b + i, a * d_b + j)]).sum())
}

fn trace_out_b(rho: &M, d_b: usize) -> M {
    M::from_fn(2, 2, |a, b| (0..d_b).map(|k| rho[(a * d_b + k, b * d_b + k)]).sum())
}

fn mutual(rho: &M, d_b: usize) -> f64 {
    entropy(&trace_out_b(rho, d_b)) + entropy(&trace_out_a(rho, d_b)) - entropy(rho)
}

fn geometric_at(rho: &M, d_b: usize, theta: f64, phi: f64) -> f64 {
    (rho - dephase(rho, d_b, theta, phi)).norm_squared()
}

fn entropic_at(rho: &M, d_b: usize, theta: f64, phi: f64) -> f64 {
    mutual(rho, d_b) - mutual(&dephase(rho, d_b, theta, phi), d_b)
}

/// Grid search followed by repeated zoomed grids around the incumbent.
fn grid_min(f: impl Fn(f64, f64) -> f64) -> f64 {
    let (n_t, n_p) = (60usize, 120usize);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=n_t {
        for j in 0..n_p {
            let (t, p) = (PI * i as f64 / n_t as f64, 2.0 * PI * j as f64 / n_p as f64);
            let v = f(t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let (mut w_t, mut w_p) = (PI / n_t as f64, 2.0 * PI / n_p as f64);
    for _ in 0..12 {
        let (_, t0, p0) = best;
        for i in -10..=10 {
            for j in -10..=10 {
                let t = t0 + w_t * i as f64 / 10.0;
                let p = p0 + w_p * j as f64 / 10.0;
                let v = f(t, p);
                if v < best.0 {
                    best = (v, t, p);
                }
            }
        }
        w_t *= 0.3;
        w_p *= 0.3;
    }
    best.0
}

fn oracle_geometric(s: &BipartiteState) -> f64 {
    let rho = s.rho().matrix().clone();
    let d_b = s.dims().d_b;
    grid_min(|t, p| geometric_at(&rho, d_b, t, p))
}

fn oracle_entropic(s: &BipartiteState) -> f64 {
    let rho = s.rho().matrix().clone();
    let d_b = s.dims().d_b;
    grid_min(|t, p| entropic_at(&rho, d_b, t, p))
}

#[test]
fn oracle_anchors_on_bell_state() {
    let bell = bell_state();
    assert!((oracle_geometric(&bell) - 0.5).abs() <= 1e-9);
    assert!((oracle_entropic(&bell) - 1.0).abs() <= 1e-9);
}

#[test]
fn optimizer_matches_oracle_on_anchor_states() {
    let opt = OptConfig::default();
    for s in [bell_state(), example_post_channel_state()] {
        let g = geometric_discord(&s, &opt).unwrap().value;
        let d = discord(&s, ChannelClass::Projective, &opt).unwrap().value;
        assert!((g - oracle_geometric(&s)).abs() <= 1e-6);
        assert!((d - oracle_entropic(&s)).abs() <= 1e-6);
    }
}

#[test]
fn post_channel_values_match_oracle_constants() {
    let s = example_post_channel_state();
    assert!((oracle_geometric(&s) - 0.125).abs() <= 1e-9);
    assert!((oracle_entropic(&s) - 0.20175207338571166).abs() <= 1e-8);
}

#[test]
fn closed_form_calibrates_against_oracle() {
    for seed in 0..10 {
        let s = random_state(2, 2, 1000 + seed);
        let closed = geometric_discord_qubit_closed_form(&s).unwrap();
        let oracle = oracle_geometric(&s);
        assert!((closed - oracle).abs() <= 1e-6, "seed {seed}: {closed} vs {oracle}");
    }
}

#[test]
fn optimizer_never_beats_oracle_by_more_than_slack() {
    let opt = OptConfig::default();
    for (d_b, seed) in [(2, 1), (3, 2), (3, 3), (4, 4)] {
        let s = random_state(2, d_b, seed);
        let g = geometric_discord(&s, &opt).unwrap().value;
        let d = discord(&s, ChannelClass::Projective, &opt).unwrap().value;
        assert!((g - oracle_geometric(&s)).abs() <= 1e-6, "D_G d_b={d_b}");
        assert!((d - oracle_entropic(&s)).abs() <= 1e-6, "D d_b={d_b}");
    }
}
