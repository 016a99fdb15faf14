use std::f64::consts::FRAC_PI_2;

use rmf_core::batch::{check_field, random_trig_curve};
use rmf_core::builtin;
use rmf_core::framing::{
    bishop_curvatures, frenet_frame, initial_frame, per_parameter, rm_curvatures, rm_curvatures_from_curve,
    rmf_double_reflection, rmf_ode, Frame, FrameField,
};
use rmf_core::numeric::linspace;
use rmf_core::{CurvatureField, ToleranceConfig, VectorN};

// The helix example written out by hand, with theta = 7s/625.
fn bishop_n1(s: f64) -> [f64; 3] {
    let (t, u) = (7.0 * s / 625.0, s / 25.0);
    [
        -t.cos() * u.cos() - 7.0 / 25.0 * t.sin() * u.sin(),
        -t.cos() * u.sin() + 7.0 / 25.0 * u.cos() * t.sin(),
        -24.0 / 25.0 * t.sin(),
    ]
}

fn bishop_n2(s: f64) -> [f64; 3] {
    let (t, u) = (7.0 * s / 625.0, s / 25.0);
    [
        -t.sin() * u.cos() + 7.0 / 25.0 * t.cos() * u.sin(),
        -t.sin() * u.sin() - 7.0 / 25.0 * t.cos() * u.cos(),
        24.0 / 25.0 * t.cos(),
    ]
}

fn dist(v: &VectorN, w: [f64; 3]) -> f64 {
    v.as_slice().iter().zip(w).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

fn max_angle(a: &FrameField, b: &FrameField) -> f64 {
    let mut worst: f64 = 0.0;
    for (fa, fb) in a.frames().iter().zip(b.frames()) {
        for (u, v) in fa.vectors().iter().zip(fb.vectors()) {
            // chord form; acos loses everything below ~2e-8
            worst = worst.max(2.0 * (u.distance(v) / 2.0).min(1.0).asin());
        }
    }
    worst
}

#[test]
fn double_reflection_matches_closed_form_bishop_frame() {
    let cfg = ToleranceConfig::default();
    let helix = builtin::helix();
    let grid = linspace(0.0, 10.0, 1001);
    let f0 = frenet_frame(&helix, 0.0, &cfg).unwrap();
    let field = rmf_double_reflection(&helix, &grid, &f0, &cfg).unwrap();
    let last = field.frames().last().unwrap();
    assert!(dist(&last.vectors()[1], bishop_n1(10.0)) < 1e-4);
    assert!(dist(&last.vectors()[2], bishop_n2(10.0)) < 1e-4);
}

#[test]
fn ode_with_closed_form_curvatures_reproduces_bishop_frame() {
    let cfg = ToleranceConfig::default();
    let kappa = 24.0 / 625.0;
    let grid = linspace(0.0, 100.0, 10_001);
    let k = CurvatureField::from_fn(&grid, |s| {
        let t = 7.0 * s / 625.0;
        vec![kappa * t.cos(), kappa * t.sin()]
    })
    .unwrap();
    let f0 = frenet_frame(&builtin::helix(), 0.0, &cfg).unwrap();
    let field = rmf_ode(&k, &f0, &cfg).unwrap();
    for f in field.frames().iter().step_by(500) {
        assert!(dist(&f.vectors()[1], bishop_n1(f.s)) < 1e-6, "s = {}", f.s);
        assert!(dist(&f.vectors()[2], bishop_n2(f.s)) < 1e-6, "s = {}", f.s);
    }
}

#[test]
fn unit_curvature_rotates_tangent_by_a_quarter_turn() {
    let cfg = ToleranceConfig::default();
    let grid = linspace(0.0, FRAC_PI_2, 1571);
    let k = CurvatureField::from_fn(&grid, |_| vec![1.0, 0.0]).unwrap();
    let field = rmf_ode(&k, &Frame::identity(3, 0.0), &cfg).unwrap();
    let t = field.frames().last().unwrap().tangent();
    assert!(dist(t, [0.0, 1.0, 0.0]) < 1e-8);
}

#[test]
fn prescribed_curvature_round_trip() {
    let cfg = ToleranceConfig::default();
    let grid = linspace(0.0, 1.0, 1001);
    let k = CurvatureField::from_fn(&grid, |s| vec![s, 0.0]).unwrap();
    let field = rmf_ode(&k, &Frame::identity(3, 0.0), &cfg).unwrap();
    let back = rm_curvatures(&field, &cfg).unwrap();
    for (i, &s) in grid.iter().enumerate() {
        assert!((back.at(i)[0] - s).abs() < 1e-5, "s = {s}: {}", back.at(i)[0]);
        assert!(back.at(i)[1].abs() < 1e-5);
    }
}

/// Angular deviation between the double-reflection field and the ODE
/// solution driven by curvatures extracted from that field, either by
/// finite differences along it or from the exact tangent derivative.
fn dr_vs_ode(curve: &rmf_core::Curve, a: f64, b: f64, h: f64, along_field: bool, cfg: &ToleranceConfig) -> f64 {
    let n = ((b - a) / h).round() as usize + 1;
    let grid = linspace(a, b, n);
    let f0 = initial_frame(curve, a, cfg).unwrap();
    let dr = rmf_double_reflection(curve, &grid, &f0, cfg).unwrap();
    let k = if along_field {
        rm_curvatures(&dr, cfg).unwrap()
    } else {
        rm_curvatures_from_curve(&dr, cfg).unwrap()
    };
    let ode = rmf_ode(&per_parameter(&k, curve, cfg).unwrap(), &f0, cfg).unwrap();
    max_angle(&dr, &ode)
}

#[test]
fn field_curvatures_give_second_order_agreement() {
    let cfg = ToleranceConfig::default();
    let helix = builtin::helix();
    let coarse = dr_vs_ode(&helix, 0.0, 100.0, 1e-1, true, &cfg);
    let fine = dr_vs_ode(&helix, 0.0, 100.0, 5e-2, true, &cfg);
    let ratio = coarse / fine;
    assert!((3.5..=4.5).contains(&ratio), "{coarse:e} / {fine:e} = {ratio}");

    let wiggly = random_trig_curve(11, 0, 4);
    let coarse = dr_vs_ode(&wiggly, 0.0, 2.0, 2e-2, true, &cfg);
    let fine = dr_vs_ode(&wiggly, 0.0, 2.0, 1e-2, true, &cfg);
    let ratio = coarse / fine;
    assert!((3.5..=4.5).contains(&ratio), "{coarse:e} / {fine:e} = {ratio}");
}

#[test]
fn double_reflection_itself_is_fourth_order() {
    // with exact curvatures the ODE is the reference and the gap is the
    // reflection scheme's own error
    let cfg = ToleranceConfig::default();
    let helix = builtin::helix();
    let coarse = dr_vs_ode(&helix, 0.0, 100.0, 1e-1, false, &cfg);
    let fine = dr_vs_ode(&helix, 0.0, 100.0, 5e-2, false, &cfg);
    let ratio = coarse / fine;
    assert!((13.0..=19.0).contains(&ratio), "{coarse:e} / {fine:e} = {ratio}");
}

#[test]
fn bishop_curvatures_recombine_to_frenet_curvature() {
    let cfg = ToleranceConfig::default();
    let curve = builtin::twisted_cubic();
    let k = bishop_curvatures(&curve, &linspace(-1.0, 1.0, 201), &cfg).unwrap();
    let frenet = k.frenet.as_ref().unwrap();
    for i in 0..k.len() {
        let (k1, k2) = (k.at(i)[0], k.at(i)[1]);
        let kappa = frenet[i].kappa;
        assert!(((k1 * k1 + k2 * k2).sqrt() - kappa).abs() <= 1e-8 * kappa);
    }
}

#[test]
fn random_fields_keep_their_invariants() {
    let cfg = ToleranceConfig::default();
    for i in 0..12 {
        let dim = [3, 4, 6][i % 3];
        let curve = random_trig_curve(2024, i as u64, dim);
        let grid = linspace(0.0, 2.0, 201);
        let f0 = initial_frame(&curve, 0.0, &cfg).unwrap();
        let dr = rmf_double_reflection(&curve, &grid, &f0, &cfg).unwrap();
        let c = check_field(&dr);
        assert!(c.orthonormality < 1e-9 && c.determinant < 1e-9 && c.rm_residual < 1e-3, "{c:?}");
        for f in dr.frames() {
            let t = curve.unit_tangent(f.s, &cfg).unwrap();
            assert!(f.tangent().distance(&t) < 1e-9);
        }
    }
}

#[test]
fn planar_circle_keeps_its_binormal() {
    let cfg = ToleranceConfig::default();
    let circle = builtin::circle(2.0, 3);
    let grid = circle.grid(400);
    let f0 = initial_frame(&circle, 0.0, &cfg).unwrap();
    let dr = rmf_double_reflection(&circle, &grid, &f0, &cfg).unwrap();
    let ez = dr.frames()[0]
        .normals()
        .iter()
        .position(|v| v[2].abs() > 0.5)
        .expect("one normal along e_z");
    for f in dr.frames() {
        assert!(f.normals()[ez].distance(&dr.frames()[0].normals()[ez]) < 1e-12);
    }
}
