use crate::error::{Error, Result};
use crate::oracles::lp::chebyshev_center_halfspaces;
use crate::scalar::Real;
use crate::words::check_on_simplex;

use super::linalg::{complement_basis, cofactor_normal, dot, norm, sub};
use super::simplex::inner_volume_formula;
use super::{Frame, Simplex};

/// Intersection of half-spaces `a_i·y ≤ b_i` with unit outward normals, in
/// the local coordinates of a [`Frame`].
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspaces<T> {
    pub normals: Vec<Vec<T>>,
    pub offsets: Vec<T>,
}

impl<T: Real> Halfspaces<T> {
    /// `min_i (b_i − a_i·y)`: the distance to the boundary for interior
    /// points, negative outside.
    pub fn distance_to_boundary(&self, y: &[T]) -> T {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, &b)| b - dot(a, y))
            .fold(T::infinity(), T::min)
    }

    pub fn contains(&self, y: &[T]) -> bool {
        self.distance_to_boundary(y) >= T::zero()
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }
}

struct Facet<T> {
    normal: Vec<T>,
    offset: T,
    members: Vec<usize>,
}

fn tolerance<T: Real>(points: &[Vec<T>]) -> T {
    let mut scale = T::zero();
    for p in points {
        for q in points {
            scale = scale.max(norm(&sub(p, q)));
        }
    }
    scale * T::epsilon() * T::lit(1e4)
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Facets of the convex hull of full-dimensional `points` ⊂ ℝᵏ by testing
/// every k-subset. Fine for the handful of points used here.
fn hull_facets<T: Real>(points: &[Vec<T>], tol: T) -> Vec<Facet<T>> {
    let k = points.first().map_or(0, Vec::len);
    let mut facets: Vec<Facet<T>> = Vec::new();
    if k == 0 {
        return facets;
    }
    combinations(points.len(), k, |idx| {
        let base = &points[idx[0]];
        let rows: Vec<Vec<T>> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let raw = if k == 1 { vec![T::one()] } else { cofactor_normal(&rows, k) };
        let len = norm(&raw);
        if len <= tol.max(T::min_positive_value()) {
            return;
        }
        let mut normal: Vec<T> = raw.into_iter().map(|x| x / len).collect();
        let mut offset = dot(&normal, base);
        let (mut above, mut below) = (false, false);
        for p in points {
            let s = dot(&normal, p) - offset;
            above |= s > tol;
            below |= s < -tol;
        }
        if above && below {
            return;
        }
        if above {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        if facets
            .iter()
            .any(|f| dot(&f.normal, &normal) > T::one() - tol && (f.offset - offset).abs() <= tol)
        {
            return;
        }
        let members = (0..points.len())
            .filter(|&i| (dot(&normal, &points[i]) - offset).abs() <= tol)
            .collect();
        facets.push(Facet { normal, offset, members });
    });
    facets
}

/// k-dimensional measure of the hull of `points` ⊂ ℝᵏ, by summing pyramids
/// over the facets and recursing into each facet.
fn hull_measure<T: Real>(points: &[Vec<T>], tol: T) -> T {
    let k = points.first().map_or(0, Vec::len);
    if k == 0 {
        return T::one();
    }
    if k == 1 {
        let (lo, hi) = points
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
        return hi - lo;
    }
    let centroid = centroid(points);
    let kk = T::from_usize_lossy(k);
    hull_facets(points, tol)
        .iter()
        .map(|f| {
            let height = f.offset - dot(&f.normal, &centroid);
            height * facet_measure(points, f, tol) / kk
        })
        .sum()
}

fn facet_measure<T: Real>(points: &[Vec<T>], f: &Facet<T>, tol: T) -> T {
    let basis = complement_basis(&f.normal);
    let projected: Vec<Vec<T>> = f
        .members
        .iter()
        .map(|&i| basis.iter().map(|b| dot(b, &points[i])).collect())
        .collect();
    hull_measure(&projected, tol)
}

fn centroid<T: Real>(points: &[Vec<T>]) -> Vec<T> {
    let k = points[0].len();
    let w = T::from_usize_lossy(points.len());
    (0..k).map(|j| points.iter().map(|p| p[j]).sum::<T>() / w).collect()
}

/// Convex polytope in Δ given by its vertices.
#[derive(Clone, Debug)]
pub struct ConvexPolytope<T> {
    frame: Frame<T>,
    vertices: Vec<Vec<T>>,
    halfspaces: Halfspaces<T>,
    volume: T,
    surface: T,
    centre: Vec<T>,
    inradius: T,
}

impl<T: Real> ConvexPolytope<T> {
    /// Convex hull of points on Δ. Points that are not extreme are dropped.
    pub fn new(points: Vec<Vec<T>>) -> Result<Self> {
        let n = points.first().map_or(0, Vec::len);
        if n < 2 || points.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidArgument("polytope points must share a length ≥ 2".into()));
        }
        for p in &points {
            check_on_simplex(p)?;
        }
        let d = n - 1;
        let frame = Frame::new(d);
        let local: Vec<Vec<T>> = points.iter().map(|p| frame.to_local(p)).collect();
        let tol = tolerance(&local);
        let facets = hull_facets(&local, tol);
        if facets.len() < d + 1 {
            return Err(Error::Degenerate("points do not span the hyperplane".into()));
        }
        let extreme: Vec<usize> = (0..local.len())
            .filter(|&i| facets.iter().filter(|f| f.members.contains(&i)).count() >= d)
            .collect();
        let mut kept: Vec<usize> = Vec::new();
        for i in extreme {
            if !kept.iter().any(|&j| norm(&sub(&local[i], &local[j])) <= tol) {
                kept.push(i);
            }
        }
        let vertices: Vec<Vec<T>> = kept.iter().map(|&i| points[i].clone()).collect();
        let local: Vec<Vec<T>> = kept.iter().map(|&i| local[i].clone()).collect();
        let facets = hull_facets(&local, tol);
        let volume = hull_measure(&local, tol);
        if !(volume > T::zero()) {
            return Err(Error::Degenerate("polytope has zero volume".into()));
        }
        let surface = facets.iter().map(|f| facet_measure(&local, f, tol)).sum();
        let halfspaces = Halfspaces {
            normals: facets.iter().map(|f| f.normal.clone()).collect(),
            offsets: facets.iter().map(|f| f.offset).collect(),
        };
        let (centre_local, inradius) =
            chebyshev_center_halfspaces(&halfspaces.normals, &halfspaces.offsets, &centroid(&local))?;
        let centre = frame.to_ambient(&centre_local);
        Ok(Self { frame, vertices, halfspaces, volume, surface, centre, inradius })
    }

    pub fn from_simplex(s: &Simplex<T>) -> Result<Self> {
        Self::new(s.vertices().to_vec())
    }

    pub fn dimension(&self) -> usize {
        self.frame.dimension()
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    /// Facet description in frame coordinates.
    pub fn halfspaces(&self) -> &Halfspaces<T> {
        &self.halfspaces
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    /// (d−1)-measure of the boundary.
    pub fn surface(&self) -> T {
        self.surface
    }

    /// One point of maximal distance to the boundary (not unique in general).
    pub fn chebyshev_centre(&self) -> &[T] {
        &self.centre
    }

    pub fn inradius(&self) -> T {
        self.inradius
    }

    /// Distance from a point of the hyperplane to the boundary; negative outside.
    pub fn distance_to_boundary(&self, x: &[T]) -> T {
        self.halfspaces.distance_to_boundary(&self.frame.to_local(x))
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.distance_to_boundary(x) >= T::zero()
    }

    /// `vol·(1 − max(0, 1 − ε/In)^d)`, an upper bound on the volume of the
    /// inner ε-neighbourhood, with equality for simplices.
    pub fn inner_neighborhood_volume_upper(&self, eps: T) -> Result<T> {
        inner_volume_formula(self.volume, self.inradius, self.dimension(), eps)
    }
}

impl<T: Real> TryFrom<&Simplex<T>> for ConvexPolytope<T> {
    type Error = Error;

    fn try_from(s: &Simplex<T>) -> Result<Self> {
        Self::from_simplex(s)
    }
}

/// Gram-determinant measure of the simplex spanned by `points`; used in tests
/// as an independent check of the hull recursion.
#[cfg(test)]
fn simplex_measure(points: &[Vec<f64>]) -> f64 {
    let edges: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let k = edges.len();
    super::linalg::gram_determinant(&edges).sqrt() / crate::scalar::factorial::<f64>(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_on_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|x| x / s).collect()
    }

    #[test]
    fn simplex_polytope_matches_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=4 {
            let s = Simplex::new((0..=d).map(|_| random_on_simplex(&mut rng, d + 1)).collect()).unwrap();
            let p = ConvexPolytope::from_simplex(&s).unwrap();
            assert!((p.volume() - s.volume()).abs() < 1e-12 * s.volume().max(1e-3));
            assert!((p.surface() - s.perimeter().unwrap()).abs() < 1e-11);
            assert!((p.inradius() - s.inradius().unwrap()).abs() < 1e-10);
            let eps = s.inradius().unwrap() / 3.0;
            let a = p.inner_neighborhood_volume_upper(eps).unwrap();
            let b = s.inner_neighborhood_volume(eps).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn interior_points_are_dropped() {
        let p = ConvexPolytope::new(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            vec![0.5, 0.5, 0.0],
        ])
        .unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert!((p.volume() - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((p.inradius() - 1.0 / 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rectangle_on_the_simplex() {
        // a 0.4 × 0.1 rectangle in frame coordinates around the barycentre
        let f = Frame::<f64>::new(2);
        let corners = [[-0.2, -0.05], [0.2, -0.05], [0.2, 0.05], [-0.2, 0.05]];
        let p = ConvexPolytope::new(corners.iter().map(|c| f.to_ambient(c)).collect()).unwrap();
        assert!((p.volume() - 0.04).abs() < 1e-14);
        assert!((p.surface() - 1.0).abs() < 1e-14);
        assert!((p.inradius() - 0.05).abs() < 1e-12);
        assert_eq!(p.inner_neighborhood_volume_upper(0.05).unwrap(), p.volume());
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let r = ConvexPolytope::new(vec![vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn hull_measure_of_a_cube_split() {
        // unit cube in ℝ³ via the hull recursion vs six tetrahedra
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        assert!((hull_measure(&pts, 1e-12) - 1.0).abs() < 1e-14);
        let tet = [pts[0].clone(), pts[1].clone(), pts[3].clone(), pts[7].clone()];
        assert!((simplex_measure(&tet) - 1.0 / 6.0).abs() < 1e-15);
    }
}
