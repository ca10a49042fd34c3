//! Randomised structural properties of the per-slot solvers and linear algebra.

mod common;

use jcas::channel::{steering_vector, ChannelRealization};
use jcas::linalg::{hermitian_eigen, hermitian_top_eigpair, DEFAULT_TOL};
use jcas::prelude::*;
use jcas::solver::baseline::{baseline_solve, min_comm_power};
use jcas::solver::zf::{zf_power_split, zf_radar_direction, zf_solve};
use proptest::prelude::*;

use common::*;

fn state(seed: u64, q: f64, theta: f64) -> NetworkState {
    let mut r = rng(seed);
    NetworkState {
        q,
        channel: ChannelRealization::new(random_vector(&mut r, 4), steering_vector(4, theta), steering_vector(2, theta)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zf_decision_structure(seed in any::<u64>(), q in 0.0..200.0f64, v in 0.1..1e4f64, p_db in -5.0..15.0f64, theta in -1.5..1.5f64) {
        let s = state(seed, q, theta);
        let params = SystemParams::normalized(from_db(p_db));
        let d = zf_solve(&s, &params, v);
        prop_assert_eq!(d.status, SolverStatus::Ok);
        prop_assert!(s.channel.h.dot(&d.w_r).norm() <= 1e-10 * params.p_max.sqrt() * s.channel.h.norm());
        prop_assert!((d.w_c.norm_sqr() + d.w_r.norm_sqr() - params.p_max).abs() <= 1e-12 * params.p_max);
        prop_assert!(d.w_c.norm_sqr() == 0.0 || d.w_r.norm_sqr() == 0.0);
        let objective = dpp_objective(&s, &d.w_c, &d.w_r, &params, v);
        // Either pure strategy is feasible; ZF picks the better of its two.
        let radar = zf_radar_direction(&s.channel.h, &s.channel.g).unwrap();
        let w = radar.direction.scale(params.p_max.sqrt());
        let radar_only = dpp_objective(&s, &ComplexVector::zeros(4), &w, &params, v);
        prop_assert!(objective >= radar_only * (1.0 - 1e-12));
    }

    #[test]
    fn power_split_is_bang_bang(a in 0.0..10.0f64, b in 0.0..10.0f64, p in 0.01..10.0f64) {
        let (p_r, p_c) = zf_power_split(a, b, p);
        prop_assert!((p_r == p && p_c == 0.0) || (p_r == 0.0 && p_c == p));
        prop_assert_eq!(p_r == p, a >= b);
    }

    #[test]
    fn baseline_meets_target_when_it_can(seed in any::<u64>(), p_db in -5.0..15.0f64, g_db in -5.0..15.0f64) {
        let s = state(seed, 0.0, std::f64::consts::PI / 8.0);
        let params = SystemParams::normalized(from_db(p_db));
        let bl = BaselineParams { gamma_min: from_db(g_db), grid_points: 101 };
        let d = baseline_solve(&s.channel, &params, &bl);
        let sinr = comm_sinr(&s.channel.h, &d.w_c, &d.w_r, params.sigma2_c);
        prop_assert!((d.w_c.norm_sqr() + d.w_r.norm_sqr() - params.p_max).abs() <= 1e-12 * params.p_max);
        let feasible = min_comm_power(&s.channel, &params, bl.gamma_min) <= params.p_max;
        if feasible {
            prop_assert_eq!(d.status, SolverStatus::Ok);
            prop_assert!(sinr >= bl.gamma_min * (1.0 - 1e-9));
        } else {
            prop_assert_eq!(d.status, SolverStatus::Infeasible);
            prop_assert_eq!(d.p_r, 0.0);
        }
    }

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..6) {
        let a = random_hermitian(&mut rng(seed), n);
        let e = hermitian_eigen(&a, DEFAULT_TOL).unwrap();
        let scale = a.frobenius_norm().max(1.0);
        for k in 0..n {
            let v = e.vector(k);
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
            let residual = a.mul_vec(&v).sub(&v.scale(e.values[k])).norm();
            prop_assert!(residual <= 1e-10 * scale);
        }
        let top = hermitian_top_eigpair(&a, DEFAULT_TOL).unwrap();
        let max = e.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((top.value - max).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn db_round_trip(x in -100.0..100.0f64) {
        prop_assert!((to_db(from_db(x)) - x).abs() <= 1e-12);
    }
}

#[test]
fn jacobi_oracle_is_self_consistent() {
    let mut r = rng(1);
    for _ in 0..50 {
        let a = random_hermitian(&mut r, 4);
        let (value, v) = oracle_top_eigpair(&a);
        assert!(a.mul_vec(&v).sub(&v.scale(value)).norm() <= 1e-12 * a.frobenius_norm());
    }
}

#[test]
fn gamma_cdf_oracle_matches_exponential_case() {
    for x in [0.1, 1.0, 3.5] {
        assert!((gamma_cdf(1, x) - (1.0 - (-x).exp())).abs() < 1e-15);
    }
}
