//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ri_entropy::oracle::sample_simplex;
use ri_entropy::{
    block_alphas, clebsch_gordan, e_gamma_3xn_even, evaluate_branch, kl_alpha, landmark_points,
    make_ri_state, minimize_kl_ppt, normalized_to_raw, partial_time_reversal, polygon_area_ratio,
    ppt_image_vertices, ppt_min_eigenvalue, ppt_polygon, projector, quantum_relative_entropy,
    ree_3x3, ree_3xn_odd, ree_for_state, simplex_vertices, twirl, verify_closed_form,
    DenseOperator64, Family, NormalizedCoords64, Region, RiState64, Spin,
};

struct Check {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Check {
    Check {
        passed,
        detail: detail.into(),
    }
}

fn nc(x: f64, y: f64) -> NormalizedCoords64 {
    NormalizedCoords64::new(x, y).unwrap()
}

fn equivalence() -> Check {
    let mut families: Vec<Family> = (1..=4)
        .map(|t| Family::TwoByN {
            j: Spin::from_twice(t),
        })
        .collect();
    families.extend([3, 5, 7, 4, 6].map(|n| Family::three_by(n).unwrap()));
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (k, family) in families.into_iter().enumerate() {
        let s = verify_closed_form::<f64>(family, 1000, 2024 + k as u64, 1e-6).unwrap();
        worst = worst.max(s.max_abs_diff);
        if !s.passed {
            failed.push(format!("{} ({:e})", family.label(), s.max_abs_diff));
        }
    }
    check(
        failed.is_empty(),
        format!(
            "9 families x 1000 samples, max |closed - oracle| = {worst:.2e} (tol 1e-6){}",
            failed
                .iter()
                .map(|f| format!(" failed {f}"))
                .collect::<String>()
        ),
    )
}

fn threshold() -> Check {
    let mut worst: f64 = 0.0;
    for t in 1..=3u32 {
        let j = Spin::from_twice(t);
        let min_eig = |p: f64| {
            let s = RiState64::from_probabilities(Spin::HALF, j, &[p, 1.0 - p]).unwrap();
            ppt_min_eigenvalue(&s)
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        if min_eig(lo) < 0.0 || min_eig(hi) >= 0.0 {
            return check(false, format!("no sign change for j = {j}"));
        }
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if min_eig(mid) < 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let expect = f64::from(t) / f64::from(t + 1);
        worst = worst.max((0.5 * (lo + hi) - expect).abs());
    }
    check(
        worst <= 1e-9,
        format!("j = 1/2, 1, 3/2: max |p_cross - 2j/(2j+1)| = {worst:.2e} (tol 1e-9)"),
    )
}

fn vertex_images() -> Check {
    let mut worst: f64 = 0.0;
    for n in 3..=16 {
        let j2 = Spin::from_dim(n).unwrap();
        let verts = simplex_vertices::<f64>(n).unwrap();
        let images = ppt_image_vertices::<f64>(n).unwrap();
        for (v, expect) in verts.iter().zip(images) {
            let rho = make_ri_state(Spin::ONE, j2, v).unwrap().to_density();
            let got = block_alphas(&partial_time_reversal(&rho).unwrap(), Spin::ONE, j2).unwrap();
            for (g, e) in got.iter().zip(expect) {
                worst = worst.max((g - e).abs());
            }
        }
    }
    check(
        worst <= 1e-10,
        format!("N = 3..16, max coordinate error = {worst:.2e} (tol 1e-10)"),
    )
}

fn landmarks() -> Check {
    let s5 = 5f64.sqrt();
    let expect = [
        (s5 / 2.0, 3f64.sqrt() / 2.0),
        (16.0 * s5 / 25.0, 0.0),
        (24.0 * s5 / 25.0, 0.0),
    ];
    let (f, g, h) = landmark_points::<f64>(5).unwrap();
    let mut worst: f64 = 0.0;
    for (p, e) in [f, g, h].iter().zip(expect) {
        worst = worst.max((p.x - e.0).abs()).max((p.y - e.1).abs());
    }
    check(
        worst <= 1e-12,
        format!("N = 5 F, G, H max error = {worst:.2e} (tol 1e-12)"),
    )
}

fn reduced_entropy(rho: &DMatrix<Complex<f64>>, n1: usize, n2: usize) -> f64 {
    let red = DMatrix::from_fn(n1, n1, |a, b| {
        (0..n2)
            .map(|k| rho[(a * n2 + k, b * n2 + k)])
            .sum::<Complex<f64>>()
    });
    let herm = (red.adjoint() + &red) * Complex::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 1e-14)
        .map(|&l| -l * l.ln())
        .sum()
}

fn spot_values() -> Check {
    let cases = [
        ("E_r(3x3 C)", 3, nc(0.0, 1.0), 2f64.ln()),
        ("E_r(3x3 B)", 3, nc(1.0, 0.0), 3f64.ln()),
        ("E_r(3x5 B)", 5, nc(1.0, 0.0), (5.0f64 / 3.0).ln()),
        ("E_Gamma(3x4 B)", 4, nc(1.0, 0.0), 2f64.ln()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, n, c, expect) in cases {
        let closed = match n {
            3 => ree_3x3(c),
            4 => e_gamma_3xn_even(4, c),
            _ => ree_3xn_odd(n, c),
        }
        .unwrap()
        .value;
        let oracle = minimize_kl_ppt(n, c).unwrap().optimum_value;
        let (dc, doo) = ((closed - expect).abs(), (oracle - expect).abs());
        ok &= dc <= 1e-10 && doo <= 1e-6;
        parts.push(format!("{name} {dc:.1e}/{doo:.1e}"));
    }
    let singlet = normalized_to_raw(3, nc(1.0, 0.0)).unwrap();
    let s = reduced_entropy(singlet.to_density().matrix(), 3, 3);
    let ds = (s - 3f64.ln()).abs();
    ok &= ds <= 1e-10;
    parts.push(format!("reduced entropy {ds:.1e}"));
    check(
        ok,
        format!(
            "closed/oracle errors: {} (tol 1e-10/1e-6)",
            parts.join(", ")
        ),
    )
}

fn curve_shapes() -> Check {
    let dir = std::env::temp_dir().join(format!("ri-entropy-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curves.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_ri-entropy"))
        .args([
            "curve",
            "--family",
            "2xN",
            "--j-list",
            "1/2,1,3/2",
            "--points",
            "401",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    if !status.success() {
        return check(false, "curve command failed");
    }
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    let mut lines = text.lines();
    if lines.next() != Some("p,j,E_r") {
        return check(false, "bad CSV header");
    }
    let mut curves: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (p, e): (f64, f64) = (f[0].parse().unwrap(), f[2].parse().unwrap());
        match curves.last_mut() {
            Some((j, pts)) if j == f[1] => pts.push((p, e)),
            _ => curves.push((f[1].to_string(), vec![(p, e)])),
        }
    }
    let labels: Vec<&str> = curves.iter().map(|c| c.0.as_str()).collect();
    if labels != ["1/2", "1", "3/2"] {
        return check(false, format!("unexpected curves {labels:?}"));
    }
    let mut ok = true;
    for (k, (_, pts)) in curves.iter().enumerate() {
        let thr = (k + 1) as f64 / (k + 2) as f64;
        for w in pts.windows(2) {
            if w[1].0 <= thr {
                ok &= w[1].1 == 0.0;
            } else if w[0].0 >= thr {
                ok &= w[1].1 > w[0].1;
            }
        }
    }
    for i in 0..curves[0].1.len() {
        let p = curves[0].1[i].0;
        if p > 0.75 {
            let (a, b, c) = (curves[0].1[i].1, curves[1].1[i].1, curves[2].1[i].1);
            ok &= a >= b && b >= c;
        }
    }
    check(ok, "j = 1/2, 1, 3/2 over 401 points: zero below threshold, increasing above, ordered on (3/4, 1]")
}

/// Endpoints, region on one side, region on the other (`None`: minimizer D).
type Edge = ((f64, f64), (f64, f64), Region, Option<Region>);

fn continuity() -> Check {
    let mut worst: f64 = 0.0;
    for n in [3usize, 5, 7] {
        let norm = |p: ri_entropy::Point64| p.to_normalized(n);
        let poly = ppt_polygon::<f64>(n).unwrap().map(norm);
        let (d, ap, e) = (poly[1], poly[2], poly[3]);
        let edges: Vec<Edge> = if n == 3 {
            vec![
                (e, ap, Region::Separable, Some(Region::TriangleACE)),
                (d, ap, Region::Separable, Some(Region::TriangleABD)),
                (
                    ap,
                    (0.0, 1.0),
                    Region::TriangleACE,
                    Some(Region::TriangleABC),
                ),
                (
                    ap,
                    (1.0, 0.0),
                    Region::TriangleABC,
                    Some(Region::TriangleABD),
                ),
            ]
        } else {
            let (f, g, h) = landmark_points::<f64>(n).unwrap();
            vec![
                (e, ap, Region::Separable, Some(Region::PolygonAFCE)),
                (d, ap, Region::Separable, Some(Region::TriangleADH)),
                (ap, norm(f), Region::PolygonAFCE, Some(Region::PolygonAHBF)),
                (ap, norm(h), Region::PolygonAHBF, Some(Region::TriangleADH)),
                (d, norm(g), Region::TriangleADH, None),
            ]
        };
        let d_state = normalized_to_raw(n, nc(d.0, 0.0)).unwrap();
        for (a, b, left, right) in edges {
            for i in 0..100 {
                let s = (i as f64 + 0.5) / 100.0;
                let c = nc(
                    (a.0 + s * (b.0 - a.0)).max(0.0),
                    (a.1 + s * (b.1 - a.1)).max(0.0),
                );
                let u = evaluate_branch(n, c, left).unwrap().value;
                let v = match right {
                    Some(r) => evaluate_branch(n, c, r).unwrap().value,
                    None => kl_alpha(&normalized_to_raw(n, c).unwrap(), &d_state).unwrap(),
                };
                worst = worst.max((u - v).abs());
            }
        }
    }
    check(
        worst <= 1e-8,
        format!("N = 3, 5, 7, 100 points per edge, max disagreement = {worst:.2e} (tol 1e-8)"),
    )
}

fn asymptotics() -> Check {
    let ratios: Vec<f64> = (5..=41)
        .step_by(2)
        .map(|n| polygon_area_ratio(n).unwrap())
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let r201: f64 = polygon_area_ratio(201).unwrap();
    let ec: Vec<f64> = [5, 7, 9, 11]
        .iter()
        .map(|&n| ree_3xn_odd(n, nc(0.0, 1.0)).unwrap().value)
        .collect();
    let decreasing = ec.windows(2).all(|w| w[1] < w[0]);
    let c_ok = decreasing || ree_3xn_odd(201, nc(0.0, 1.0)).unwrap().value < 0.1;
    check(
        increasing && r201 > 0.95 && c_ok,
        format!(
            "area ratio increasing over odd N = 5..41: {increasing}, ratio(201) = {r201:.4}; E_r(C) N = 5..11 = {:.4?}",
            ec
        ),
    )
}

fn random_density(rng: &mut ChaCha8Rng, n1: usize, n2: usize) -> DenseOperator64 {
    let d = n1 * n2;
    let a = DMatrix::from_fn(d, d, |_, _| {
        Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let m = &a * a.adjoint();
    let tr = m.trace().re;
    DenseOperator64::bipartite(m.map(|z| z / tr), n1, n2).unwrap()
}

fn random_ri(rng: &mut ChaCha8Rng, n: usize) -> (NormalizedCoords64, RiState64) {
    let p = sample_simplex(rng, 3);
    let c = nc(p[0], p[1]);
    (c, normalized_to_raw(n, c).unwrap())
}

fn property_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut notes = Vec::new();
    let mut ok = true;

    // Twirl is idempotent.
    let mut worst: f64 = 0.0;
    for (t1, t2) in [(1u32, 1u32), (1, 2), (1, 3), (2, 2), (2, 4), (2, 3)] {
        let (j1, j2) = (Spin::from_twice(t1), Spin::from_twice(t2));
        for _ in 0..5 {
            let once = twirl(&random_density(&mut rng, j1.dim(), j2.dim()), j1, j2).unwrap();
            let twice = twirl(&once.to_density(), j1, j2).unwrap();
            for (a, b) in once.alphas().iter().zip(twice.alphas()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    ok &= worst <= 1e-12;
    notes.push(format!("twirl {worst:.1e}"));

    // Clebsch-Gordan orthonormality.
    let mut worst: f64 = 0.0;
    for t1 in 0..=8u32 {
        for t2 in 0..=8u32 {
            let (j1, j2) = (Spin::from_twice(t1), Spin::from_twice(t2));
            let basis: Vec<(Spin, i32)> = Spin::coupled_range(j1, j2)
                .flat_map(|t| t.twice_magnetic().map(move |m| (t, m)))
                .collect();
            let table: Vec<Vec<f64>> = basis
                .iter()
                .map(|&(t, m)| {
                    j1.twice_magnetic()
                        .flat_map(|m1| j2.twice_magnetic().map(move |m2| (m1, m2)))
                        .map(|(m1, m2)| clebsch_gordan(j1, m1, j2, m2, t, m).unwrap())
                        .collect()
                })
                .collect();
            for (a, ra) in table.iter().enumerate() {
                for (b, rb) in table.iter().enumerate() {
                    let dot: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
                    worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
                }
            }
        }
    }
    ok &= worst <= 1e-12;
    notes.push(format!("CG {worst:.1e}"));

    // Projector completeness.
    let mut worst: f64 = 0.0;
    for (t1, t2) in [(1u32, 1u32), (2, 2), (2, 5), (3, 4), (4, 4)] {
        let (j1, j2) = (Spin::from_twice(t1), Spin::from_twice(t2));
        let dim = j1.dim() * j2.dim();
        let mut sum = DenseOperator64::zeros(dim);
        for t in Spin::coupled_range(j1, j2) {
            sum = sum.add(&projector(j1, j2, t).unwrap()).unwrap();
        }
        worst = worst.max(sum.max_abs_diff(&DenseOperator64::identity(dim)));
    }
    ok &= worst <= 1e-12;
    notes.push(format!("projectors {worst:.1e}"));

    // KL = dense relative entropy on commuting (RI) states.
    let mut worst: f64 = 0.0;
    for n in [3usize, 4, 5] {
        for _ in 0..10 {
            let (_, a) = random_ri(&mut rng, n);
            let (_, b) = random_ri(&mut rng, n);
            let dense = quantum_relative_entropy(&a.to_density(), &b.to_density()).unwrap();
            worst = worst.max((kl_alpha(&a, &b).unwrap() - dense).abs());
        }
    }
    ok &= worst <= 1e-10;
    notes.push(format!("KL/dense {worst:.1e}"));

    // Convexity of the entanglement measure.
    let mut worst = f64::NEG_INFINITY;
    for k in 0..200 {
        let n = [3usize, 4, 5, 7][k % 4];
        let (ca, a) = random_ri(&mut rng, n);
        let (cb, b) = random_ri(&mut rng, n);
        let x: f64 = rng.random();
        let (pa, pb) = (ca.probabilities(), cb.probabilities());
        let m = nc((1.0 - x) * pa[0] + x * pb[0], (1.0 - x) * pa[1] + x * pb[1]);
        let e = |s: &RiState64| ree_for_state(s).unwrap().value;
        let defect = e(&normalized_to_raw(n, m).unwrap()) - ((1.0 - x) * e(&a) + x * e(&b));
        worst = worst.max(defect);
    }
    ok &= worst <= 1e-10;
    notes.push(format!("convexity defect {worst:.1e}"));

    // Mixing towards the minimizer keeps the minimizer.
    let mut worst: f64 = 0.0;
    let mut lines = 0;
    while lines < 50 {
        let n = [3usize, 4, 5, 7][lines % 4];
        let (_, rho) = random_ri(&mut rng, n);
        let r = ree_for_state(&rho).unwrap();
        if r.region.is_separable() {
            continue;
        }
        lines += 1;
        let (p, q) = (rho.probabilities(), r.minimizer.probabilities());
        for k in 1..10 {
            let x = f64::from(k) / 10.0;
            let mixed: Vec<f64> = p
                .iter()
                .zip(&q)
                .map(|(a, b)| (1.0 - x) * a + x * b)
                .collect();
            let rx = RiState64::from_probabilities(rho.j1(), rho.j2(), &mixed).unwrap();
            let value = ree_for_state(&rx).unwrap().value;
            worst = worst.max((value - kl_alpha(&rx, &r.minimizer).unwrap()).abs());
        }
    }
    ok &= worst <= 1e-8;
    notes.push(format!("mixing line {worst:.1e}"));

    check(ok, notes.join(", "))
}

type Criterion = fn() -> Check;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("closed form vs oracle", equivalence),
        ("separability threshold", threshold),
        ("vertex images", vertex_images),
        ("landmarks at N = 5", landmarks),
        ("spot values", spot_values),
        ("2xN curves", curve_shapes),
        ("boundary continuity", continuity),
        ("large-N behaviour", asymptotics),
        ("property suite", property_suite),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let c = run();
        if !c.passed {
            failures += 1;
        }
        println!(
            "[{}] {}. {}: {} ({:.2}s)",
            if c.passed { "PASS" } else { "FAIL" },
            k + 1,
            name,
            c.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
