//! Test-only oracles and generators shared by the integration suites.
#![allow(dead_code)]

use coadea::lp::{LinearProgram, Relation, Sense};
use rand::Rng;

/// Integer-coefficient LP with `n <= max_n` variables and `m <= max_m` rows,
/// entries in `[-5, 5]`.
pub fn random_lp<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> LinearProgram {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let int = |rng: &mut R| rng.gen_range(-5i32..=5) as f64;
    let objective = (0..n).map(|_| int(rng)).collect();
    let matrix = (0..m).map(|_| (0..n).map(|_| int(rng)).collect()).collect();
    let relations = (0..m)
        .map(|_| match rng.gen_range(0..5) {
            0 | 1 => Relation::LessEq,
            2 | 3 => Relation::GreaterEq,
            _ => Relation::Equal,
        })
        .collect();
    let rhs = (0..m).map(|_| int(rng)).collect();
    let sense = if rng.gen_bool(0.5) {
        Sense::Minimize
    } else {
        Sense::Maximize
    };
    LinearProgram::new(sense, objective, matrix, relations, rhs)
}

/// Distinct integer points in `[1, 30]^2`, not all collinear.
pub fn random_dmu_set<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<[f64; 2]> {
    loop {
        let size = rng.gen_range(min..=max);
        let mut pts: Vec<[f64; 2]> = Vec::with_capacity(size);
        while pts.len() < size {
            let p = [rng.gen_range(1..=30) as f64, rng.gen_range(1..=30) as f64];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        if convex_hull(&pts).len() >= 3 {
            return pts;
        }
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Strict convex hull vertices (no collinear points) in counter-clockwise
/// order, by gift wrapping. Exact for integer coordinates.
pub fn convex_hull(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    if pts.len() < 3 {
        return pts.to_vec();
    }
    let start = *pts
        .iter()
        .min_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])))
        .unwrap();
    let mut hull = vec![start];
    let mut current = start;
    loop {
        let mut next = if pts[0] == current { pts[1] } else { pts[0] };
        for &q in pts {
            if q == current {
                continue;
            }
            let c = cross(current, next, q);
            // q is clockwise of next, or collinear and farther.
            if c < 0.0 || (c == 0.0 && dist2(current, q) > dist2(current, next)) {
                next = q;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        current = next;
        assert!(hull.len() <= pts.len(), "gift wrapping did not close");
    }
    hull
}

/// Hull vertices that are the unique minimizer of `w . x` for some `w > 0`
/// componentwise: the corners of the lower-left staircase.
pub fn lower_left_vertices(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let hull = convex_hull(pts);
    let h = hull.len();
    if h < 3 {
        return hull;
    }
    let normal = |a: [f64; 2], b: [f64; 2]| [b[1] - a[1], a[0] - b[0]];
    let cx = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
    let neg = |v: [f64; 2]| v[0] < 0.0 && v[1] < 0.0;
    (0..h)
        .filter(|&i| {
            let prev = hull[(i + h - 1) % h];
            let v = hull[i];
            let next = hull[(i + 1) % h];
            let n1 = normal(prev, v);
            let n2 = normal(v, next);
            let d = [-1.0, -1.0];
            neg(n1) || neg(n2) || (cx(n1, d) >= 0.0 && cx(d, n2) >= 0.0)
        })
        .map(|i| hull[i])
        .collect()
}

/// Points strictly inside the convex hull (not on any edge).
pub fn strictly_interior(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let hull = convex_hull(pts);
    let h = hull.len();
    pts.iter()
        .copied()
        .filter(|&p| h >= 3 && (0..h).all(|i| cross(hull[i], hull[(i + 1) % h], p) > 0.0))
        .collect()
}

/// Marks the members of a mutually non-dominated 2-D front that lie on the
/// lower-left boundary of its convex hull, within a vertical slack of `tol`.
pub fn convex_portion_mask(front: &[Vec<f64>], tol: f64) -> Vec<bool> {
    front
        .iter()
        .map(|p| {
            !front.iter().any(|q| {
                front.iter().any(|r| {
                    if !(q[0] < p[0] && p[0] < r[0]) {
                        return false;
                    }
                    let t = (p[0] - q[0]) / (r[0] - q[0]);
                    let chord = q[1] + t * (r[1] - q[1]);
                    p[1] - chord > tol
                })
            })
        })
        .collect()
}

pub fn to_vecs(pts: &[[f64; 2]]) -> Vec<Vec<f64>> {
    pts.iter().map(|p| p.to_vec()).collect()
}

/// Objective-space diagonal of a front's bounding box.
pub fn diagonal(front: &[Vec<f64>]) -> f64 {
    let k = front[0].len();
    (0..k)
        .map(|d| {
            let lo = front.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
            let hi = front.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
            (hi - lo).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}
