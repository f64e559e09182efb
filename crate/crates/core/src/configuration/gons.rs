use std::f64::consts::TAU;

use super::{divisors_desc, Configuration};
use crate::geometry::{canonical, Circle};

/// Maximum-cardinality regular polygons among the points of one circle.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegularGonSet {
    /// Each gon as sorted indices into the configuration.
    pub gons: Vec<Vec<usize>>,
}

impl RegularGonSet {
    pub fn is_empty(&self) -> bool {
        self.gons.is_empty()
    }

    /// Cardinality shared by all gons (0 when empty).
    pub fn size(&self) -> usize {
        self.gons.first().map_or(0, Vec::len)
    }

    /// M′(C): the union of every gon.
    pub fn union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.gons.iter().flatten().copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    }
}

/// All largest subsets of the points on `circle` with more than one element,
/// a cardinality dividing `rho_f`, and vertices equally spaced. Coincident
/// points contribute a single vertex.
pub fn max_regular_gons(circle: &Circle, cfg: &Configuration, rho_f: usize) -> RegularGonSet {
    let tol = cfg.tol();
    if circle.radius <= tol.length {
        return RegularGonSet::default();
    }
    let mut on: Vec<(usize, f64)> = Vec::new();
    for i in 0..cfg.len() {
        if !cfg.at_center(i) && tol.eq_len(cfg.dist(i), circle.radius) && !on.iter().any(|&(j, _)| cfg.points()[j] == cfg.points()[i]) {
            on.push((i, cfg.angle(i)));
        }
    }
    let find = |theta: f64| on.iter().find(|&&(_, a)| tol.eq_angle(a, theta)).map(|&(i, _)| i);
    for k in divisors_desc(rho_f) {
        if k < 2 || k > on.len() {
            continue;
        }
        let mut gons: Vec<Vec<usize>> = Vec::new();
        for &(i, a) in &on {
            let mut gon = vec![i];
            for j in 1..k {
                match find(canonical(a + TAU * j as f64 / k as f64)) {
                    Some(v) => gon.push(v),
                    None => break,
                }
            }
            if gon.len() == k {
                gon.sort_unstable();
                if !gons.contains(&gon) {
                    gons.push(gon);
                }
            }
        }
        if !gons.is_empty() {
            return RegularGonSet { gons };
        }
    }
    RegularGonSet::default()
}

/// Whether the given points (all on one circle about the center) are the
/// vertices of a regular polygon, without repeated vertices.
pub fn is_regular_polygon(indices: &[usize], cfg: &Configuration) -> bool {
    let k = indices.len();
    if k < 2 {
        return false;
    }
    let mut angles: Vec<f64> = indices.iter().map(|&i| cfg.angle(i)).collect();
    angles.sort_by(f64::total_cmp);
    let step = TAU / k as f64;
    (0..k).all(|j| {
        let next = if j + 1 == k { angles[0] + TAU } else { angles[j + 1] };
        (next - angles[j] - step).abs() <= cfg.tol().angle
    })
}
