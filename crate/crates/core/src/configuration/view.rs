use std::cmp::Ordering;
use std::f64::consts::TAU;

use super::Configuration;
use crate::geometry::{canonical, Tolerance};
use crate::Error;

/// The view of a point: `(clockwise angle, normalized distance)` couples.
/// A point at the center has the minimum view by fiat and no couples.
#[derive(Clone, Debug, PartialEq)]
pub struct ViewSequence {
    pub at_center: bool,
    pub couples: Vec<(f64, f64)>,
}

/// The view of point `i` of `cfg`.
///
/// First the point itself, then the other points on its ray from farthest to
/// closest, then the remaining rays clockwise, each farthest to closest.
/// Copies of a point repeat its couple; central points close the sequence as
/// `(0, 0)` couples.
pub fn view(i: usize, cfg: &Configuration) -> Result<ViewSequence, Error> {
    if i >= cfg.len() {
        return Err(Error::NotAMember);
    }
    if cfg.at_center(i) {
        return Ok(ViewSequence { at_center: true, couples: Vec::new() });
    }
    let tol = cfg.tol();
    let delta = cfg.radius();
    let ti = cfg.angle(i);
    let mut others: Vec<(f64, f64)> = Vec::with_capacity(cfg.len());
    let mut central = 0;
    for j in 0..cfg.len() {
        if j == i {
            continue;
        }
        if cfg.at_center(j) {
            central += 1;
            continue;
        }
        let mut a = canonical(ti - cfg.angle(j));
        if a <= tol.angle || a >= TAU - tol.angle {
            a = 0.0;
        }
        others.push((a, cfg.dist(j) / delta));
    }
    others.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut group = f64::NEG_INFINITY;
    for c in others.iter_mut() {
        if c.0 - group <= tol.angle {
            c.0 = group;
        } else {
            group = c.0;
        }
    }
    others.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.total_cmp(&x.1)));
    let mut couples = Vec::with_capacity(cfg.len());
    couples.push((0.0, cfg.dist(i) / delta));
    couples.extend(others);
    couples.extend(std::iter::repeat((0.0, 0.0)).take(central));
    Ok(ViewSequence { at_center: false, couples })
}

/// Lexicographic order, angle first then distance, each with banded equality.
pub fn compare_views(a: &ViewSequence, b: &ViewSequence, tol: &Tolerance) -> Ordering {
    match (a.at_center, b.at_center) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    for (x, y) in a.couples.iter().zip(&b.couples) {
        if (x.0 - y.0).abs() > tol.angle {
            return x.0.total_cmp(&y.0);
        }
        if (x.1 - y.1).abs() > tol.length {
            return x.1.total_cmp(&y.1);
        }
    }
    a.couples.len().cmp(&b.couples.len())
}

/// The members of `subset` (indices into `cfg`) whose view is minimal.
pub fn min_view_robots(subset: &[usize], cfg: &Configuration) -> Result<Vec<usize>, Error> {
    if subset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let central: Vec<usize> = subset.iter().copied().filter(|&i| cfg.at_center(i)).collect();
    if !central.is_empty() {
        return Ok(central);
    }
    let views: Vec<ViewSequence> = subset.iter().map(|&i| view(i, cfg)).collect::<Result<_, _>>()?;
    let mut best = 0;
    for k in 1..views.len() {
        if compare_views(&views[k], &views[best], cfg.tol()) == Ordering::Less {
            best = k;
        }
    }
    Ok(subset
        .iter()
        .zip(&views)
        .filter(|(_, v)| compare_views(v, &views[best], cfg.tol()) == Ordering::Equal)
        .map(|(&i, _)| i)
        .collect())
}

/// False when two views differ, yet agree once the tolerance is widened by `factor`.
pub fn views_well_separated(cfg: &Configuration, factor: f64) -> bool {
    let tol = *cfg.tol();
    let wide = tol.scaled(factor);
    let views: Vec<ViewSequence> = (0..cfg.len()).map(|i| view(i, cfg).expect("index in range")).collect();
    for i in 0..views.len() {
        for j in i + 1..views.len() {
            if compare_views(&views[i], &views[j], &tol) != Ordering::Equal
                && compare_views(&views[i], &views[j], &wide) == Ordering::Equal
            {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn cfg(pts: &[(f64, f64)]) -> Configuration {
        Configuration::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect(), Tolerance::default()).unwrap()
    }

    #[test]
    fn first_couple_is_own_distance() {
        let c = cfg(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.5)]);
        let v = view(2, &c).unwrap();
        assert_eq!(v.couples[0], (0.0, 0.5));
        assert_eq!(v.couples.len(), 3);
    }

    #[test]
    fn views_follow_clockwise_rays() {
        let c = cfg(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.5), (0.0, -0.3)]);
        let v = view(0, &c).unwrap();
        // from angle 0 clockwise: (0,-0.3) at π/2, (-1,0) at π, (0,0.5) at 3π/2
        let angles: Vec<f64> = v.couples.iter().map(|c| c.0).collect();
        assert!(angles.windows(2).all(|w| w[0] <= w[1]));
        assert!((v.couples[1].1 - 0.3).abs() < 1e-12);
    }

    #[test]
    fn symmetric_robots_share_views() {
        let c = cfg(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (0.5, 0.1), (-0.1, 0.5), (-0.5, -0.1), (0.1, -0.5)]);
        let min = min_view_robots(&(0..8).collect::<Vec<_>>(), &c).unwrap();
        assert_eq!(min.len(), 4);
    }

    #[test]
    fn center_is_minimum() {
        let c = cfg(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(min_view_robots(&[0, 1, 2], &c).unwrap(), vec![2]);
        assert!(min_view_robots(&[], &c).is_err());
    }

    #[test]
    fn asymmetric_gives_single_minimum() {
        let c = cfg(&[(1.0, 0.0), (-1.0, 0.0), (0.2, 0.3), (-0.4, 0.1)]);
        assert_eq!(min_view_robots(&[0, 1, 2, 3], &c).unwrap().len(), 1);
    }
}
