use std::sync::Arc;

use approx::assert_relative_eq;
use clifford_orlicz::analysis::{
    bergman_decompose, random_field, DecompositionResult, LinearSolverConfig,
};
use clifford_orlicz::grid::{
    build_disc, dirac_apply, dirac_bar_apply, fd_partial, laplacian_apply, trace_restrict,
    BoundaryMesh, MultivectorField,
};
use clifford_orlicz::orlicz::{
    clifford_luxembourg_norm, luxembourg_norm, modular_integral, sobolev_norm,
};
use clifford_orlicz::transforms::{cauchy_boundary_on_grid, teodorescu};
use clifford_orlicz::{
    BladeIndex, GridDomain64, KernelConfig, Multivector, Multivector64, NormConfig, OrliczFunction,
    VectorN64,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Grid = (Arc<GridDomain64>, Arc<BoundaryMesh<f64>>);

const LEVELS: [f64; 2] = [1.0 / 16.0, 1.0 / 32.0];

fn disc(h: f64) -> Grid {
    build_disc(1.0, h).unwrap()
}

fn multivector(n: usize) -> impl Strategy<Value = Multivector64> {
    prop::collection::vec(-2.0..2.0_f64, 1 << n)
        .prop_map(move |c| Multivector64::from_coeffs(n, c).unwrap())
}

fn triple() -> impl Strategy<Value = (Multivector64, Multivector64, Multivector64)> {
    (1usize..=4).prop_flat_map(|n| (multivector(n), multivector(n), multivector(n)))
}

fn psi() -> impl Strategy<Value = OrliczFunction> {
    prop_oneof![
        (1.2..4.0_f64).prop_map(OrliczFunction::power),
        (1.2..4.0_f64).prop_map(OrliczFunction::power_over_p),
        Just(OrliczFunction::ExpMinusOne),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_is_associative_and_distributive((a, b, c) in triple()) {
        let ab_c = (&a * &b).checked_mul(&c).unwrap();
        let a_bc = a.checked_mul(&(&b * &c)).unwrap();
        prop_assert!(ab_c.max_abs_diff(&a_bc) < 1e-12);
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn conjugation_reverses_products((a, b, _) in triple()) {
        let lhs = (&a * &b).conjugate();
        let rhs = &b.conjugate() * &a.conjugate();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn vectors_are_inverted_by_their_kelvin_inverse(n in 1usize..=5, seed in prop::collection::vec(-3.0..3.0_f64, 5)) {
        let x = VectorN64::new(seed[..n].to_vec()).unwrap();
        prop_assume!(x.norm() > 1e-3);
        let one = Multivector64::scalar(n, 1.0).unwrap();
        let prod = &x.embed() * &x.kelvin_inverse().unwrap();
        prop_assert!(prod.max_abs_diff(&one) < 1e-12);
    }

    #[test]
    fn luxembourg_norm_is_a_norm(
        psi in psi(),
        f in prop::collection::vec(-3.0..3.0_f64, 24),
        g in prop::collection::vec(-3.0..3.0_f64, 24),
        c in -4.0..4.0_f64,
    ) {
        let w = vec![1.0 / 24.0; 24];
        let cfg = NormConfig::default();
        let norm = |v: &[f64]| luxembourg_norm(v, &w, &psi, &cfg).unwrap();
        let nf = norm(&f);
        let scaled: Vec<f64> = f.iter().map(|x| c * x).collect();
        prop_assert!((norm(&scaled) - c.abs() * nf).abs() <= 1e-8 * (1.0 + nf));
        let sum: Vec<f64> = f.iter().zip(&g).map(|(x, y)| x + y).collect();
        prop_assert!(norm(&sum) <= nf + norm(&g) + 1e-8);
    }
}

#[test]
fn dirac_and_conjugate_dirac_commute() {
    let (d, _) = disc(0.125);
    let f = MultivectorField::from_fn(d, |x| {
        Multivector64::from_coeffs(
            2,
            vec![x[0] * x[0] * x[1], x[1].sin(), x[0].cos(), x[0] * x[1]],
        )
        .unwrap()
    })
    .unwrap();
    let a = dirac_apply(&dirac_bar_apply(&f));
    let b = dirac_bar_apply(&dirac_apply(&f));
    assert!(a.sub(&b).unwrap().max_norm() < 1e-10);
}

#[test]
fn teodorescu_is_linear() {
    let (d, _) = disc(0.125);
    let cfg = KernelConfig::default();
    let f = MultivectorField::from_fn(d.clone(), |x| {
        Multivector64::from_coeffs(2, vec![x[0], 1.0, x[1], 0.5]).unwrap()
    })
    .unwrap();
    let g = MultivectorField::from_fn(d, |x| {
        Multivector64::from_coeffs(2, vec![0.0, x[1] * x[1], -1.0, x[0]]).unwrap()
    })
    .unwrap();
    let lhs = teodorescu(&f.scale(2.0).add(&g.scale(-3.0)).unwrap(), &cfg).unwrap();
    let rhs = teodorescu(&f, &cfg)
        .unwrap()
        .scale(2.0)
        .add(&teodorescu(&g, &cfg).unwrap().scale(-3.0))
        .unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_norm() < 1e-12);
}

#[test]
fn outward_normals_integrate_to_zero() {
    for (_, mesh) in [
        build_disc(1.0_f64, 0.0625).unwrap(),
        build_disc(0.7_f64, 0.05).unwrap(),
    ] {
        for axis in 0..2 {
            let s: f64 = (0..mesh.len())
                .map(|i| mesh.facet(i).weight * mesh.normal(i)[axis])
                .sum();
            assert!(s.abs() < 1e-12, "{s}");
        }
    }
}

#[test]
fn clifford_norm_scales_with_constant_fields() {
    let (d, _) = disc(0.125);
    let one =
        MultivectorField::from_fn(d.clone(), |_| Multivector64::scalar(2, 1.0).unwrap()).unwrap();
    let psi = OrliczFunction::power(2.0);
    let cfg = NormConfig::default();
    let base = clifford_luxembourg_norm(&one, &psi, &cfg).unwrap();
    assert_relative_eq!(base, d.mask_volume().sqrt(), max_relative = 1e-8);
    let scaled = clifford_luxembourg_norm(&one.scale(-2.5), &psi, &cfg).unwrap();
    assert_relative_eq!(scaled, 2.5 * base, max_relative = 1e-8);
}

fn cubic(d: &Arc<GridDomain64>) -> MultivectorField<f64> {
    MultivectorField::from_fn(d.clone(), |x| {
        let (a, b) = (x[0], x[1]);
        Multivector64::from_coeffs(
            2,
            vec![
                a * a * b - b * b * b,
                0.5 * a * b * b,
                a * a * a + 2.0 * b,
                a - b * b,
            ],
        )
        .unwrap()
    })
    .unwrap()
}

fn smooth(d: &Arc<GridDomain64>) -> MultivectorField<f64> {
    MultivectorField::from_fn(d.clone(), |x| {
        let c = vec![
            (x[0] + 0.3 * x[1]).sin(),
            x[0] * x[1].exp(),
            (2.0 * x[1]).cos(),
            x[0] * x[0],
        ];
        Multivector64::from_coeffs(2, c).unwrap()
    })
    .unwrap()
}

fn scalar_field(d: &Arc<GridDomain64>, f: impl Fn(&[f64]) -> f64) -> MultivectorField<f64> {
    MultivectorField::from_fn(d.clone(), |x| Multivector64::scalar(2, f(x)).unwrap()).unwrap()
}

fn decompose(f: &MultivectorField<f64>, mesh: &Arc<BoundaryMesh<f64>>) -> DecompositionResult<f64> {
    let psi = OrliczFunction::power(2.0);
    bergman_decompose(
        f,
        mesh,
        &psi,
        &NormConfig::default(),
        &LinearSolverConfig::default(),
    )
    .unwrap()
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn clifford_norm_is_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=5 {
        let c = 2f64.powf(n as f64 / 2.0);
        let mut worst = 0.0_f64;
        for _ in 0..10_000 {
            let mut draw = || {
                let v = (0..1 << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Multivector::from_coeffs(n, v).unwrap()
            };
            let (a, b) = (draw(), draw());
            worst = worst.max((&a * &b).clifford_norm() / (a.clifford_norm() * b.clifford_norm()));
        }
        println!("n = {n}: max |ab| / (|a||b|) = {worst:.4}, bound {c:.4}");
        assert!(worst <= c, "n = {n}: {worst}");
    }
}

#[test]
fn modular_is_one_at_the_norm() {
    let (d, _) = disc(1.0 / 16.0);
    let cfg = NormConfig::default();
    let f = random_field(&d, 3, 0).unwrap();
    let w = f.weights();
    for psi in [
        OrliczFunction::power(1.5),
        OrliczFunction::power_over_p(3.0),
        OrliczFunction::ExpMinusOne,
    ] {
        for a in 0..f.stride() {
            let comp = f.component(BladeIndex::from_bits(a as u32));
            let beta = luxembourg_norm(&comp, &w, &psi, &cfg).unwrap();
            let m = modular_integral(&comp, &w, &psi, beta).unwrap();
            assert!(
                (1.0 - 10.0 * cfg.bisect_tol..=1.0).contains(&m),
                "{psi:?}: {m}"
            );
        }
    }
}

#[test]
fn sobolev_norm_grows_with_order() {
    let (d, _) = disc(1.0 / 16.0);
    let cfg = NormConfig::default();
    for psi in [OrliczFunction::power(2.0), OrliczFunction::ExpMinusOne] {
        for i in 0..5 {
            let f = random_field(&d, 8, i).unwrap();
            let s: Vec<f64> = (0..=2)
                .map(|k| sobolev_norm(&f, k, &psi, &cfg).unwrap())
                .collect();
            assert!(s[0] <= s[1] && s[1] <= s[2], "{s:?}");
        }
    }
}

#[test]
fn square_of_dirac_is_minus_laplacian() {
    for h in LEVELS {
        let (d, _) = disc(h);
        let keep = d.central_stencil_mask(2);
        let gap = |f: &MultivectorField<f64>| {
            let dd = dirac_apply(&dirac_apply(f));
            dd.add(&laplacian_apply(f))
                .unwrap()
                .masked(&keep)
                .max_norm()
        };
        assert!(gap(&cubic(&d)) < 1e-10);
    }
    let smooth_gap: Vec<f64> = LEVELS
        .iter()
        .map(|&h| {
            let (d, _) = disc(h);
            let f = smooth(&d);
            let keep = d.central_stencil_mask(2);
            dirac_apply(&dirac_apply(&f))
                .add(&laplacian_apply(&f))
                .unwrap()
                .masked(&keep)
                .max_norm()
        })
        .collect();
    assert!(smooth_gap[1] < smooth_gap[0] / 3.0, "{smooth_gap:?}");
}

#[test]
fn divergence_theorem_holds_to_first_order() {
    let mut gaps = Vec::new();
    for h in LEVELS {
        let (d, mesh) = disc(h);
        let phi = scalar_field(&d, |x| x[0] * x[0] * x[1] + x[0].exp());
        let tr = trace_restrict(&phi, &mesh).unwrap();
        let mut gap = 0.0_f64;
        for j in 0..2 {
            let p = fd_partial(&phi, j).unwrap();
            let vol = (0..d.len()).map(|c| p.value(c)[0]).sum::<f64>() * d.cell_volume();
            let surf: f64 = (0..mesh.len())
                .map(|i| tr.value(i)[0] * mesh.normal(i)[j] * mesh.facet(i).weight)
                .sum();
            gap = gap.max((vol - surf).abs());
        }
        assert!(gap < 2.0 * h, "h = {h}: {gap}");
        gaps.push(gap);
    }
    assert!(decreasing(&gaps), "{gaps:?}");
}

#[test]
fn partials_are_second_order() {
    let errs: Vec<f64> = LEVELS
        .iter()
        .map(|&h| {
            let (d, _) = disc(h);
            let f = scalar_field(&d, |x| x[1].sin());
            let exact = scalar_field(&d, |x| x[1].cos());
            fd_partial(&f, 1).unwrap().sub(&exact).unwrap().max_norm()
        })
        .collect();
    let rate = errs[0] / errs[1];
    assert!((3.5..=4.5).contains(&rate), "{errs:?}");
}

#[test]
fn cauchy_transform_is_discretely_monogenic_inside() {
    let cfg = KernelConfig::default();
    let mut res = Vec::new();
    for h in LEVELS {
        let (d, mesh) = disc(h);
        let g = trace_restrict(&random_field(&d, 4, 1).unwrap(), &mesh).unwrap();
        let (xi, _) = cauchy_boundary_on_grid(&g, &d, &cfg).unwrap();
        let keep: Vec<bool> = d
            .interior_mask(0.25)
            .iter()
            .zip(d.central_stencil_mask(2))
            .map(|(a, b)| *a && b)
            .collect();
        res.push(dirac_apply(&xi).l2_norm_on(&keep) / xi.l2_norm_on(&keep));
    }
    assert!(decreasing(&res) && res[1] < 0.01, "{res:?}");
}

#[test]
fn cauchy_transform_is_linear() {
    let (d, mesh) = disc(0.125);
    let cfg = KernelConfig::default();
    let a = trace_restrict(&random_field(&d, 1, 0).unwrap(), &mesh).unwrap();
    let b = trace_restrict(&random_field(&d, 1, 1).unwrap(), &mesh).unwrap();
    let combo = clifford_orlicz::BoundaryField64::from_data(
        mesh.clone(),
        a.data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| 2.0 * x - 3.0 * y)
            .collect(),
    )
    .unwrap();
    let xi = |g| cauchy_boundary_on_grid(g, &d, &cfg).unwrap().0;
    let lhs = xi(&combo);
    let rhs = xi(&a).scale(2.0).add(&xi(&b).scale(-3.0)).unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_norm() <= 1e-12 * (1.0 + rhs.max_norm()));
}

#[test]
fn potential_generator_has_vanishing_trace() {
    let mut res = Vec::new();
    for h in LEVELS {
        let (d, mesh) = disc(h);
        let r = decompose(&random_field(&d, 11, 2).unwrap(), &mesh);
        res.push(r.diagnostics.trace_residual);
        assert!(
            r.diagnostics.trace_residual < 3.0 * h,
            "h = {h}: {}",
            r.diagnostics.trace_residual
        );
    }
    assert!(decreasing(&res), "{res:?}");
}

#[test]
fn decomposition_is_nearly_direct() {
    let mut errs = Vec::new();
    for h in LEVELS {
        let (d, mesh) = disc(h);
        let g = decompose(&random_field(&d, 11, 2).unwrap(), &mesh).monogenic_part;
        let eta = decompose(&random_field(&d, 12, 5).unwrap(), &mesh).potential_part;
        let r = decompose(&g.add(&eta).unwrap(), &mesh);
        let e = r
            .monogenic_part
            .relative_error(&g, None)
            .unwrap()
            .max(r.potential_part.relative_error(&eta, None).unwrap());
        errs.push(e);
    }
    assert!(decreasing(&errs) && errs[1] < 0.05, "{errs:?}");
}
