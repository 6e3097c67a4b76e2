//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use clifford_orlicz::analysis::{
    bergman_decompose, bergman_decompose_sobolev, manufactured_bvp, mapping_probe, random_field,
    solve_first_order_bvp, BuiltinField, BvpConfig, DualTrials, LinearSolverConfig, ProbeConfig,
    ProbeOperator,
};
use clifford_orlicz::grid::{
    build_ball, build_box, build_disc, build_disc_with_facets, trace_restrict, BoundaryField,
    BoundaryMesh, GridDomain, MultivectorField,
};
use clifford_orlicz::orlicz::{clifford_luxembourg_norm, luxembourg_norm};
use clifford_orlicz::transforms::{
    borel_pompeiu_residual, cauchy_boundary_on_grid, right_inverse_error,
};
use clifford_orlicz::{BladeIndex, KernelConfig, Multivector, NormConfig, OrliczFunction, VectorN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Grid = (Arc<GridDomain<f64>>, Arc<BoundaryMesh<f64>>);
type Outcome = Result<String, String>;

fn disc(h: f64) -> Grid {
    build_disc(1.0, h).unwrap()
}

fn ball(h: f64) -> Grid {
    build_ball(1.0, h).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_mv(rng: &mut ChaCha8Rng, dim: usize) -> Multivector<f64> {
    let c = (0..1 << dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(dim, c).unwrap()
}

fn algebra_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=5 {
        for i in 0..n {
            for j in 0..n {
                let ei = Multivector::basis_vector(n, i + 1).unwrap();
                let ej = Multivector::basis_vector(n, j + 1).unwrap();
                let s = &(&ei * &ej) + &(&ej * &ei);
                let expect = Multivector::scalar(n, if i == j { -2.0 } else { 0.0 }).unwrap();
                if s != expect {
                    return Err(format!(
                        "e_i e_j + e_j e_i wrong for i = {i}, j = {j} in n = {n}"
                    ));
                }
            }
        }
    }
    let mut worst = 0.0_f64;
    for t in 0..1000 {
        let n = 1 + t % 5;
        let x = VectorN::new((0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
        let v = x.embed();
        let sq = &v * &v;
        worst = worst.max(sq.max_abs_diff(&Multivector::scalar(n, -x.norm_squared()).unwrap()));
        let inv = x.kelvin_inverse().unwrap();
        worst = worst.max((&v * &inv).max_abs_diff(&Multivector::scalar(n, 1.0).unwrap()));
        worst = worst.max((&inv * &v).max_abs_diff(&Multivector::scalar(n, 1.0).unwrap()));
    }
    let mut assoc = 0.0_f64;
    let mut conj = 0.0_f64;
    for _ in 0..1000 {
        let (a, b, c) = (
            random_mv(&mut rng, 3),
            random_mv(&mut rng, 3),
            random_mv(&mut rng, 3),
        );
        assoc = assoc.max((&(&a * &b) * &c).max_abs_diff(&(&a * &(&b * &c))));
        conj = conj.max(
            (&a * &b)
                .conjugate()
                .max_abs_diff(&(&b.conjugate() * &a.conjugate())),
        );
    }
    let worst = worst.max(assoc).max(conj);
    check(
        worst <= 1e-12,
        format!("anticommutation exact; max deviation of squares/inverses/associativity/conjugation {worst:.2e}"),
    )
}

fn luxembourg_oracle() -> Outcome {
    let (d, _) = disc(1.0 / 16.0);
    let cfg = NormConfig::default();
    let mut worst = 0.0_f64;
    for p in [1.5, 2.0, 3.0] {
        let psi = OrliczFunction::power(p);
        for i in 0..100 {
            let f = random_field(&d, 42, i).unwrap();
            let w = f.weights();
            for a in 0..f.stride() {
                let comp = f.component(BladeIndex::from_bits(a as u32));
                let lp = comp
                    .iter()
                    .zip(&w)
                    .map(|(x, w)| w * x.abs().powf(p))
                    .sum::<f64>()
                    .powf(1.0 / p);
                let lux = luxembourg_norm(&comp, &w, &psi, &cfg).unwrap();
                worst = worst.max((lux - lp).abs());
            }
        }
    }
    let (unit, _) = build_box(&[1.0_f64, 1.0], 0.125).unwrap();
    let two = MultivectorField::from_fn(unit, |_| Multivector::scalar(2, 2.0).unwrap()).unwrap();
    let c = clifford_luxembourg_norm(&two, &OrliczFunction::power(2.0), &cfg).unwrap();
    check(
        worst <= 1e-8 && (c - 2.0).abs() <= 1e-9,
        format!("max |lux - L^p| = {worst:.2e}; constant 2 -> {c:.12}"),
    )
}

const BP_FIELDS: [BuiltinField; 3] = [
    BuiltinField::PolyX1,
    BuiltinField::MonogenicPhi,
    BuiltinField::ZeroTraceBump,
];

fn bp_error(grid: &Grid, field: BuiltinField) -> f64 {
    let f = field.sample(&grid.0).unwrap();
    borel_pompeiu_residual(&f, &grid.1, &KernelConfig::default())
        .unwrap()
        .rel_error
}

fn borel_pompeiu() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, coarse, fine, cap) in [
        ("disc", disc(1.0 / 16.0), disc(1.0 / 32.0), Some(0.1)),
        ("ball", ball(1.0 / 8.0), ball(1.0 / 12.0), None),
    ] {
        for field in BP_FIELDS {
            let (a, b) = (bp_error(&coarse, field), bp_error(&fine, field));
            ok &= b < a && cap.is_none_or(|c| b < c);
            parts.push(format!("{name}/{} {a:.2e}->{b:.2e}", field.name()));
        }
    }
    check(ok, parts.join(", "))
}

fn right_inverse() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let (coarse, fine) = (disc(1.0 / 16.0), disc(1.0 / 32.0));
    for field in BuiltinField::ALL {
        let e = |g: &Grid| {
            right_inverse_error(&field.sample(&g.0).unwrap(), None, &KernelConfig::default())
                .unwrap()
        };
        let (a, b) = (e(&coarse), e(&fine));
        ok &= b < a && b < 0.1;
        parts.push(format!("{} {a:.2e}->{b:.2e}", field.name()));
    }
    check(ok, parts.join(", "))
}

fn cauchy_reproduction() -> Outcome {
    let cfg = KernelConfig::default();
    let err = |h: f64, facets: usize| {
        let (d, mesh) = build_disc_with_facets(1.0, h, facets).unwrap();
        let f = BuiltinField::MonogenicPhi.sample(&d).unwrap();
        let (xi, keep) =
            cauchy_boundary_on_grid(&trace_restrict(&f, &mesh).unwrap(), &d, &cfg).unwrap();
        xi.relative_error(&f, Some(&keep)).unwrap()
    };
    let (a, b) = (err(1.0 / 16.0, 128), err(1.0 / 32.0, 256));
    check(
        b < a && b < 0.05,
        format!("128 facets {a:.2e} -> 256 facets {b:.2e}"),
    )
}

fn decomposition() -> Outcome {
    let psi = OrliczFunction::power(2.0);
    let norm = NormConfig::default();
    let solver = LinearSolverConfig::default();
    let (coarse, fine) = (disc(1.0 / 16.0), disc(1.0 / 32.0));
    let mut ok = true;
    let mut worst_rec = 0.0_f64;
    let mut parts = Vec::new();
    for field in BuiltinField::ALL {
        let mut res = Vec::new();
        for (d, mesh) in [&coarse, &fine] {
            let f = field.sample(d).unwrap();
            let r = bergman_decompose(&f, mesh, &psi, &norm, &solver).unwrap();
            worst_rec = worst_rec.max(r.diagnostics.reconstruction_error);
            let s = bergman_decompose_sobolev(&f, 1, mesh, &psi, &norm, &solver).unwrap();
            worst_rec = worst_rec.max(s.diagnostics.reconstruction_error);
            res.push(r.diagnostics.monogenicity_residual);
            if d.h() == fine.0.h() {
                let frac = r.monogenic_fraction();
                match field {
                    BuiltinField::MonogenicPhi => {
                        ok &= frac >= 0.95;
                        parts.push(format!("monogenic routed {frac:.4}"));
                    }
                    BuiltinField::DbarPotential => {
                        ok &= 1.0 - frac >= 0.95;
                        parts.push(format!("potential routed {:.4}", 1.0 - frac));
                    }
                    _ => {}
                }
            }
        }
        ok &= res[1] < res[0];
        parts.push(format!(
            "{} |Dg| {:.2e}->{:.2e}",
            field.name(),
            res[0],
            res[1]
        ));
    }
    for i in 0..5 {
        let f = random_field(&coarse.0, 5, i).unwrap();
        let r = bergman_decompose(&f, &coarse.1, &psi, &norm, &solver).unwrap();
        worst_rec = worst_rec.max(r.diagnostics.reconstruction_error);
    }
    ok &= worst_rec <= 1e-8;
    parts.push(format!("max reconstruction {worst_rec:.2e}"));
    check(ok, parts.join(", "))
}

fn bvp() -> Outcome {
    let cfg = BvpConfig::default();
    let mut errs = Vec::new();
    let mut ratios = Vec::new();
    for h in [1.0 / 16.0, 1.0 / 32.0] {
        let (d, mesh) = disc(h);
        let (u, f, g) = manufactured_bvp(&d, &mesh).unwrap();
        let r = solve_first_order_bvp(&f, &g, &cfg).unwrap();
        errs.push(r.solution_error(&u).unwrap());
        ratios.push(r.summary.norm_estimate.ratio);
    }
    let (d, mesh) = disc(1.0 / 16.0);
    let zero = solve_first_order_bvp(
        &MultivectorField::zeros(d),
        &BoundaryField::zeros(mesh),
        &cfg,
    )
    .unwrap();
    let stable = ratios.iter().all(|r| r.is_finite() && *r > 0.0) && {
        let q = ratios[1] / ratios[0];
        (0.5..=2.0).contains(&q)
    };
    check(
        errs[1] < errs[0] && errs[1] < 0.1 && zero.solution.is_zero() && stable,
        format!(
            "error {:.2e}->{:.2e}; zero data exact: {}; ratio {:.4}->{:.4}",
            errs[0],
            errs[1],
            zero.solution.is_zero(),
            ratios[0],
            ratios[1]
        ),
    )
}

fn dual_bound() -> Outcome {
    let (d, _) = disc(1.0 / 16.0);
    let cfg = NormConfig::default();
    let base = OrliczFunction::power_over_p(2.0);
    let mut worst = 0.0_f64;
    for psi in [base.clone(), base.conjugate()] {
        let trials = DualTrials::new(&d, &psi, 20, 3, &cfg).unwrap();
        for i in 0..100 {
            let f = random_field(&d, 17, i).unwrap();
            let bound = trials.lower_bound(&f).unwrap();
            let norm = clifford_luxembourg_norm(&f, &psi, &cfg).unwrap();
            worst = worst.max(bound / (norm * (1.0 + 5.0 * d.h())));
        }
    }
    check(
        worst <= 1.0,
        format!("max bound / (|f| (1 + 5h)) = {worst:.4}"),
    )
}

fn probes() -> Outcome {
    let cfg = ProbeConfig::default();
    let (coarse, fine) = (disc(1.0 / 16.0), disc(1.0 / 32.0));
    let mut ok = true;
    let mut parts = Vec::new();
    for op in ProbeOperator::ALL {
        let a = mapping_probe(op, &coarse.0, &coarse.1, &cfg)
            .unwrap()
            .max_ratio;
        let b = mapping_probe(op, &fine.0, &fine.1, &cfg).unwrap().max_ratio;
        let q = b / a;
        ok &= a.is_finite() && b.is_finite() && a > 0.0 && (0.5..=2.0).contains(&q);
        parts.push(format!("{op:?} {a:.4}->{b:.4}"));
    }
    check(ok, parts.join(", "))
}

fn determinism() -> Outcome {
    let run = || {
        let (d, mesh) = disc(1.0 / 16.0);
        let (_, f, g) = manufactured_bvp(&d, &mesh).unwrap();
        let bvp = solve_first_order_bvp(&f, &g, &BvpConfig::default()).unwrap();
        let cfg = ProbeConfig {
            suite_size: 10,
            seed: 99,
            ..ProbeConfig::default()
        };
        let probe = mapping_probe(ProbeOperator::Teodorescu, &d, &mesh, &cfg).unwrap();
        let dec = bergman_decompose(
            &random_field(&d, 99, 0).unwrap(),
            &mesh,
            &OrliczFunction::power(2.0),
            &NormConfig::default(),
            &LinearSolverConfig::default(),
        )
        .unwrap();
        format!(
            "{}\n{}\n{}",
            serde_json::to_string(&bvp.summary).unwrap(),
            serde_json::to_string(&probe).unwrap(),
            serde_json::to_string(&dec.diagnostics).unwrap()
        )
    };
    let (a, b) = (run(), run());
    check(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("algebra axioms", algebra_axioms),
        ("Luxembourg norm oracle", luxembourg_oracle),
        ("Borel–Pompeiu refinement", borel_pompeiu),
        ("Teodorescu right inverse", right_inverse),
        ("Cauchy reproduction", cauchy_reproduction),
        ("decomposition", decomposition),
        ("first-order BVP", bvp),
        ("dual-norm bound", dual_bound),
        ("mapping probes", probes),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[{:>2}] PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}] FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
