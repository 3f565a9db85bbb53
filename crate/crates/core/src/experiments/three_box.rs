//! The three-box paradox as a qutrit: preselection `(1,1,1)/sqrt3`,
//! postselection `(1,-1,1)/sqrt3`, and one projector per box.
//!
//! After the fixed canonicalizing unitary the initial and final states are
//! coherent (`i = e_z`, `f = (2 sqrt2, 0, -1)/3`) and each box state carries
//! a Majorana pair: `n` for box 1, `r` for box 2, `m` for box 3.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::bloch_to_qubit;
use crate::canonical::three_box_transform;
use crate::majorana::{entanglement_entropy_state, majorana_points, two_qubit_amplitudes};
use crate::nlevel_values::{abl_distribution, coherent_point, projector, weak_value_direct};
use crate::numerics::{identity, CMatrix};
use crate::qubit_values::projector_weak_value_geometric;
use crate::{BlochVector, Error, NLevelState, PolarComplex, Result};

/// Closed-form Majorana pairs `(n, r, m)` of the three canonical box states.
pub fn three_box_closed_form_points() -> [[BlochVector; 2]; 3] {
    let x = 2.0 - 3f64.sqrt();
    let q = 3f64.powf(0.25);
    let s3 = 3f64.sqrt();
    let v = |a: f64, b: f64, c: f64| BlochVector { x: a / s3, y: b / s3, z: c / s3 };
    let ny = q * (6.0 * x).sqrt();
    let n = [v(-SQRT_2 * x, ny, -x), v(-SQRT_2 * x, -ny, -x)];
    let r = [v(SQRT_2, 0.0, 1.0), v(-SQRT_2, 0.0, -1.0)];
    let m = [
        v(2.0 * (x * (1.0 + q * x.sqrt())).sqrt(), 0.0, x - 2.0 * q * x.sqrt()),
        v(-2.0 * (x * (1.0 - q * x.sqrt())).sqrt(), 0.0, x + 2.0 * q * x.sqrt()),
    ];
    [n, r, m]
}

/// Reflection through the axis `r`: `v -> 2 (r.v) r - v`.
pub fn axis_reflection(r: &BlochVector, v: &BlochVector) -> BlochVector {
    r.scale(2.0 * r.dot(v)).sub(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxFactor {
    pub point: BlochVector,
    /// Qubit factor modulus scaled by `2 K` of the box state.
    pub modulus: f64,
    pub solid_angle: f64,
    pub weak_value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxReport {
    /// 1, 2 or 3.
    pub index: usize,
    /// Name of the Majorana pair: `n`, `r` or `m`.
    pub pair: String,
    pub points: [BlochVector; 2],
    pub k: f64,
    pub factors: [BoxFactor; 2],
    pub weak_value: PolarComplex,
    pub weak_value_direct: PolarComplex,
    pub entropy: f64,
    /// Coefficients on `|-r,-r>`, the symmetric `|r,-r>` combination and `|r,r>`.
    pub r_basis_image: [Complex64; 3],
    /// Normalized bisector of the pair: the closest product state, if defined.
    pub bisector: Option<BlochVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblContext {
    pub name: String,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeBoxCheck {
    pub name: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeBoxReport {
    pub i: BlochVector,
    pub f: BlochVector,
    pub boxes: Vec<BoxReport>,
    pub weak_value_sum: Complex64,
    pub abl: Vec<AblContext>,
    pub checks: Vec<ThreeBoxCheck>,
}

impl ThreeBoxReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn check(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.deviation)
    }
}

pub fn three_box_states() -> (NLevelState, NLevelState) {
    (
        NLevelState::from_real(&[1.0, 1.0, 1.0]).expect("nonzero"),
        NLevelState::from_real(&[1.0, -1.0, 1.0]).expect("nonzero"),
    )
}

/// Reorders `computed` to follow `reference` by nearest point.
fn match_pair(reference: &[BlochVector; 2], computed: &[BlochVector]) -> [BlochVector; 2] {
    let d = |a: &BlochVector, b: &BlochVector| a.sub(b).norm();
    if d(&reference[0], &computed[0]) + d(&reference[1], &computed[1])
        <= d(&reference[0], &computed[1]) + d(&reference[1], &computed[0])
    {
        [computed[0], computed[1]]
    } else {
        [computed[1], computed[0]]
    }
}

fn phase_insensitive_distance(a: &[Complex64; 3], b: &[f64; 3]) -> f64 {
    let ov: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|y| y * y).sum();
    1.0 - ov.norm_sqr() / (na * nb)
}

fn r_basis_image(state: &NLevelState, r: &BlochVector) -> Result<[Complex64; 3]> {
    let m = two_qubit_amplitudes(state)?;
    let plus = bloch_to_qubit(r).amplitudes();
    let minus = bloch_to_qubit(&-*r).amplitudes();
    let amp = |a: &[Complex64; 2], b: &[Complex64; 2]| {
        let mut s = Complex64::new(0.0, 0.0);
        for u in 0..2 {
            for v in 0..2 {
                s += a[u].conj() * b[v].conj() * m[u][v];
            }
        }
        s
    };
    Ok([amp(&minus, &minus), amp(&plus, &minus) * SQRT_2, amp(&plus, &plus)])
}

/// Full three-box reproduction: Majorana pairs, the qubit factor table, box
/// weak values, ABL probabilities, entanglement and symmetry checks.
pub fn three_box_report() -> Result<ThreeBoxReport> {
    let (psi_i, psi_f) = three_box_states();
    let (u1, u2) = three_box_transform();
    let u = &u2 * &u1;
    let ci = psi_i.transformed(&u)?;
    let cf = psi_f.transformed(&u)?;
    let i = coherent_point(&ci).ok_or_else(|| Error::NotCanonical("preselection is not a product state".into()))?;
    let f = coherent_point(&cf).ok_or_else(|| Error::NotCanonical("postselection is not a product state".into()))?;
    let closed = three_box_closed_form_points();
    let names = ["n", "r", "m"];
    let r_axis = closed[1][0];

    let mut boxes = Vec::with_capacity(3);
    let mut checks = Vec::new();
    let mut point_dev = 0.0f64;
    for k in 0..3 {
        let original = NLevelState::basis(3, k)?;
        let state = original.transformed(&u)?;
        let rep = majorana_points(&state)?;
        let points = match_pair(&closed[k], &rep.points);
        point_dev = point_dev.max(points[0].max_abs_diff(&closed[k][0])).max(points[1].max_abs_diff(&closed[k][1]));
        let scale = 2.0 * rep.k;
        let mut factors = [BoxFactor { point: points[0], modulus: 0.0, solid_angle: 0.0, weak_value: Complex64::new(0.0, 0.0) }; 2];
        for (slot, p) in factors.iter_mut().zip(points.iter()) {
            let (_, b) = projector_weak_value_geometric(&i, p, &f)?;
            let q = b.factors[0];
            slot.point = *p;
            slot.modulus = q.modulus_ratio * scale;
            slot.solid_angle = q.solid_angle;
            slot.weak_value = Complex64::from_polar(slot.modulus, -0.5 * q.solid_angle);
        }
        let total = factors[0].weak_value * factors[1].weak_value;
        let unwrapped = -0.5 * (factors[0].solid_angle + factors[1].solid_angle);
        let weak_value = PolarComplex::from_complex(total).with_unwrapped(unwrapped);
        let weak_value_direct = weak_value_direct(&psi_i, &projector(&original), &psi_f)?;
        let sum = points[0].add(&points[1]);
        let bisector = (sum.norm() > 1e-9).then(|| sum.scale(1.0 / sum.norm()));
        boxes.push(BoxReport {
            index: k + 1,
            pair: names[k].to_string(),
            points,
            k: rep.k,
            factors,
            weak_value,
            weak_value_direct,
            entropy: entanglement_entropy_state(&state)?,
            r_basis_image: r_basis_image(&state, &r_axis)?,
            bisector,
        });
    }
    let weak_value_sum: Complex64 = boxes.iter().map(|b| b.weak_value.to_complex()).sum();

    let mut push = |name: &str, deviation: f64| checks.push(ThreeBoxCheck { name: name.to_string(), deviation });
    let s3 = 3f64.sqrt();
    push("i_is_north", i.max_abs_diff(&BlochVector::NORTH));
    push("f_closed_form", f.max_abs_diff(&BlochVector { x: 2.0 * SQRT_2 / 3.0, y: 0.0, z: -1.0 / 3.0 }));
    push("points_closed_form", point_dev);
    let k_inv = [2.0 * s3 - 2.0, SQRT_2, 2.0 * s3 - 2.0];
    push("k_closed_form", (0..3).map(|k| (1.0 / boxes[k].k - k_inv[k]).abs()).fold(0.0, f64::max));

    let big = 2.0 * (3.0 + 2.0 * s3).sqrt().atan();
    let table: [[(f64, f64); 2]; 3] = [
        [(1.0, -big), (1.0, big)],
        [((2.0 + s3).sqrt(), 0.0), ((2.0 - s3).sqrt(), 2.0 * PI)],
        [(1.0, 0.0), (1.0, 0.0)],
    ];
    let mut mod_dev = 0.0f64;
    let mut angle_dev = 0.0f64;
    for k in 0..3 {
        for q in 0..2 {
            mod_dev = mod_dev.max((boxes[k].factors[q].modulus - table[k][q].0).abs());
            angle_dev = angle_dev.max((boxes[k].factors[q].solid_angle - table[k][q].1).abs());
        }
    }
    push("table_moduli", mod_dev);
    push("table_solid_angles", angle_dev);
    let expected_wv = [1.0, -1.0, 1.0];
    push(
        "box_weak_values",
        (0..3).map(|k| (boxes[k].weak_value.to_complex() - expected_wv[k]).norm()).fold(0.0, f64::max),
    );
    push(
        "geometric_matches_direct",
        boxes
            .iter()
            .map(|b| (b.weak_value.to_complex() - b.weak_value_direct.to_complex()).norm())
            .fold(0.0, f64::max),
    );
    push("weak_value_sum", (weak_value_sum - 1.0).norm());
    push(
        "conjugate_n_factors",
        (boxes[0].factors[0].weak_value - boxes[0].factors[1].weak_value.conj()).norm(),
    );

    let refl = |v: &BlochVector| axis_reflection(&r_axis, v);
    let pts = |k: usize| boxes[k].points;
    push(
        "reflection_exchanges_n",
        refl(&pts(0)[0]).max_abs_diff(&pts(0)[1]).max(refl(&pts(0)[1]).max_abs_diff(&pts(0)[0])),
    );
    push(
        "reflection_exchanges_m",
        refl(&pts(2)[0]).max_abs_diff(&pts(2)[1]).max(refl(&pts(2)[1]).max_abs_diff(&pts(2)[0])),
    );
    push("reflection_exchanges_i_f", refl(&i).max_abs_diff(&f).max(refl(&f).max_abs_diff(&i)));
    push(
        "reflection_fixes_r",
        refl(&pts(1)[0]).max_abs_diff(&pts(1)[0]).max(refl(&pts(1)[1]).max_abs_diff(&pts(1)[1])),
    );

    let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    let expected_entropy = [h(0.25), 1.0, h(0.25)];
    push("entropies", (0..3).map(|k| (boxes[k].entropy - expected_entropy[k]).abs()).fold(0.0, f64::max));
    push(
        "r_basis_images",
        phase_insensitive_distance(&boxes[0].r_basis_image, &[0.5 * s3, 0.0, 0.5])
            .max(phase_insensitive_distance(&boxes[2].r_basis_image, &[-0.5, 0.0, 0.5 * s3]))
            .max(phase_insensitive_distance(&boxes[1].r_basis_image, &[0.0, 1.0, 0.0])),
    );
    push("bell_overlap", boxes[0].r_basis_image[1].norm().max(boxes[2].r_basis_image[1].norm()));
    let bis = |k: usize, want: BlochVector| boxes[k].bisector.map_or(f64::INFINITY, |b| b.max_abs_diff(&want));
    push("bisectors", bis(0, -r_axis).max(bis(2, r_axis)));

    let ps: Vec<CMatrix> = (0..3).map(|k| projector(&NLevelState::basis(3, k).expect("basis"))).collect();
    let mut abl = Vec::new();
    for k in 0..3 {
        let ctx = [ps[k].clone(), identity(3) - &ps[k]];
        abl.push(AblContext {
            name: format!("{{P{}, 1-P{}}}", k + 1, k + 1),
            probabilities: abl_distribution(&psi_i, &ctx, &psi_f)?,
        });
    }
    abl.push(AblContext { name: "{P1, P2, P3}".into(), probabilities: abl_distribution(&psi_i, &ps, &psi_f)? });
    let expected_abl: [&[f64]; 4] = [&[1.0, 0.0], &[0.2, 0.8], &[1.0, 0.0], &[1.0 / 3.0; 3]];
    push(
        "abl",
        abl.iter()
            .zip(expected_abl)
            .flat_map(|(c, e)| c.probabilities.iter().zip(e).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max),
    );

    Ok(ThreeBoxReport { i, f, boxes, weak_value_sum, abl, checks })
}
