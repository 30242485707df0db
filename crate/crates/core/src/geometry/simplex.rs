use crate::error::{Error, Result};
use crate::scalar::{factorial, Real};
use crate::words::{check_on_simplex, LinearMap};

use super::linalg;
use super::standard_simplex_log_volume;

/// Below this volume a simplex is flagged degenerate.
const DEGENERATE_LOG_VOLUME: f64 = -690.775_527_898_213_7; // ln 1e-300

#[derive(Clone, Debug, PartialEq)]
struct Metrics<T> {
    facets: Vec<T>,
    perimeter: T,
    incentre: Vec<T>,
    inradius: T,
}

/// A d-simplex with vertices on the unit simplex, with cached measures.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex<T> {
    vertices: Vec<Vec<T>>,
    log_volume: T,
    metrics: Option<Metrics<T>>,
}

impl<T: Real> Simplex<T> {
    /// Builds a simplex from `d + 1` points of ℝ^{d+1} on Δ. Affinely
    /// dependent vertices give a simplex flagged degenerate, not an error.
    pub fn new(vertices: Vec<Vec<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::InvalidArgument("a simplex needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "a simplex in Δ ⊂ ℝ^{n} needs {n} vertices of length {n}"
            )));
        }
        for v in &vertices {
            check_on_simplex(v)?;
        }
        let d = n - 1;
        let columns: Vec<T> = (0..n).flat_map(|r| vertices.iter().map(move |v| v[r])).collect();
        let log_volume = linalg::log_abs_determinant(&columns, n) + T::lit(standard_simplex_log_volume(d));
        let mut s = Self { vertices, log_volume, metrics: None };
        if log_volume.is_finite() && log_volume.as_f64() > DEGENERATE_LOG_VOLUME {
            s.metrics = Some(s.compute_metrics());
        }
        Ok(s)
    }

    /// The standard simplex Δ itself.
    pub fn standard(d: usize) -> Self {
        let n = d + 1;
        let vertices = (0..n)
            .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::new(vertices).expect("standard simplex is valid")
    }

    fn compute_metrics(&self) -> Metrics<T> {
        let n = self.vertices.len();
        let d = n - 1;
        let facets = facet_measures_of(&self.vertices);
        let perimeter: T = facets.iter().copied().sum();
        let mut incentre = vec![T::zero(); n];
        for (v, &f) in self.vertices.iter().zip(&facets) {
            for (c, &x) in incentre.iter_mut().zip(v) {
                *c += f * x;
            }
        }
        for c in &mut incentre {
            *c /= perimeter;
        }
        let inradius = T::from_usize_lossy(d) * self.volume() / perimeter;
        Metrics { facets, perimeter, incentre, inradius }
    }

    fn metrics(&self) -> Result<&Metrics<T>> {
        self.metrics
            .as_ref()
            .ok_or_else(|| Error::Degenerate(format!("simplex volume e^{} is below 1e-300", self.log_volume)))
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.metrics.is_none()
    }

    pub fn volume(&self) -> T {
        self.log_volume.exp()
    }

    /// `ln vol`, finite for simplices too thin for `volume` to represent.
    pub fn log_volume(&self) -> T {
        self.log_volume
    }

    /// Measure of facet `j`, the facet opposite vertex `j`.
    pub fn facet_measures(&self) -> Result<&[T]> {
        Ok(&self.metrics()?.facets)
    }

    pub fn perimeter(&self) -> Result<T> {
        Ok(self.metrics()?.perimeter)
    }

    /// Facet-measure-weighted average of the vertices.
    pub fn incentre(&self) -> Result<&[T]> {
        Ok(&self.metrics()?.incentre)
    }

    /// `d·vol/per`.
    pub fn inradius(&self) -> Result<T> {
        Ok(self.metrics()?.inradius)
    }

    /// Barycentric coordinates of a point of the hyperplane `{|x|₁ = 1}`.
    pub fn barycentric(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.vertices.len();
        if x.len() != n {
            return Err(Error::InvalidArgument(format!("point has length {}, expected {n}", x.len())));
        }
        let columns: Vec<T> = (0..n).flat_map(|r| self.vertices.iter().map(move |v| v[r])).collect();
        linalg::solve(&columns, n, x).ok_or_else(|| Error::Degenerate("singular vertex matrix".into()))
    }

    /// Signed distance from `x` to each facet hyperplane, positive inside.
    pub fn facet_distances(&self, x: &[T]) -> Result<Vec<T>> {
        let m = self.metrics()?;
        let lambda = self.barycentric(x)?;
        let dv = T::from_usize_lossy(self.dimension()) * self.volume();
        Ok(lambda.iter().zip(&m.facets).map(|(&l, &f)| l * dv / f).collect())
    }

    /// `d(x, ∂S)` for `x` inside; negative outside.
    pub fn distance_to_boundary(&self, x: &[T]) -> Result<T> {
        Ok(self.facet_distances(x)?.into_iter().fold(T::infinity(), T::min))
    }

    pub fn contains(&self, x: &[T]) -> Result<bool> {
        Ok(self.barycentric(x)?.iter().all(|&l| l >= T::zero()))
    }

    /// Homothetic copy with ratio `lambda` about the incentre.
    pub fn scaled_about_incentre(&self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let c = self.incentre()?.to_vec();
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(&c).map(|(&x, &ci)| ci + lambda * (x - ci)).collect())
            .collect();
        Self::new(vertices)
    }

    /// `vol{x ∈ S : d(x, ∂S) ≤ ε} = vol·(1 − max(0, 1 − ε/In)^d)`.
    pub fn inner_neighborhood_volume(&self, eps: T) -> Result<T> {
        inner_volume_formula(self.volume(), self.inradius()?, self.dimension(), eps)
    }
}

/// (d−1)-measures of the facets of the simplex with the given vertices;
/// facet `j` omits vertex `j`.
pub fn facet_measures_of<T: Real>(vertices: &[Vec<T>]) -> Vec<T> {
    let n = vertices.len();
    let norm = factorial::<T>(n - 2);
    (0..n)
        .map(|skip| {
            let rest: Vec<&Vec<T>> = (0..n).filter(|&i| i != skip).map(|i| &vertices[i]).collect();
            let edges: Vec<Vec<T>> = rest[1..].iter().map(|v| linalg::sub(v, rest[0])).collect();
            linalg::gram_determinant(&edges).sqrt() / norm
        })
        .collect()
}

pub(crate) fn inner_volume_formula<T: Real>(volume: T, inradius: T, d: usize, eps: T) -> Result<T> {
    if !(eps >= T::zero()) {
        return Err(Error::InvalidArgument(format!("ε must be non-negative, got {eps}")));
    }
    let keep = (T::one() - eps / inradius).max(T::zero());
    Ok(volume * (T::one() - keep.powi(d as i32)))
}

pub fn simplex_volume<T: Real>(s: &Simplex<T>) -> T {
    s.volume()
}

pub fn inner_neighborhood_volume<T: Real>(s: &Simplex<T>, eps: T) -> Result<T> {
    s.inner_neighborhood_volume(eps)
}

/// `T(S)` for the projectivisation `T` of `map`.
pub fn image_simplex<T: Real, A: LinearMap>(map: &A, s: &Simplex<T>) -> Result<Simplex<T>> {
    let vertices = s
        .vertices()
        .iter()
        .map(|v| crate::words::projectivize(map, v))
        .collect::<Result<Vec<_>>>()?;
    Simplex::new(vertices)
}

/// `vol(T(S))/vol(S) = ∏_e |N e|₁⁻¹` over the vertices `e` of `S`.
pub fn volume_ratio<T: Real, A: LinearMap>(map: &A, s: &Simplex<T>) -> Result<T> {
    Ok(log_volume_ratio(map, s)?.exp())
}

pub fn log_volume_ratio<T: Real, A: LinearMap>(map: &A, s: &Simplex<T>) -> Result<T> {
    let n = map.size();
    if n != s.vertices().len() {
        return Err(Error::InvalidArgument(format!(
            "{n}×{n} matrix cannot act on a {}-simplex",
            s.dimension()
        )));
    }
    let a = map.real_entries::<T>();
    Ok(s.vertices()
        .iter()
        .map(|v| {
            let image_norm: T = (0..n).map(|r| (0..n).map(|c| a[r * n + c] * v[c]).sum::<T>()).sum();
            -image_norm.ln()
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{GeneratorSet, HoleMatrix, MatrixProduct, Word};
    use proptest::prelude::*;

    const ALPHA: f64 = 0.793_700_525_984_099_7; // 2^(-1/3)

    fn main_hole() -> Simplex<f64> {
        Simplex::new(vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5]]).unwrap()
    }

    fn hole_matrix() -> HoleMatrix {
        let r = |a: f64, b: f64, c: f64| vec![a * ALPHA, b * ALPHA, c * ALPHA];
        HoleMatrix::new(&[r(0.0, 1.0, 1.0), r(1.0, 0.0, 1.0), r(1.0, 1.0, 0.0)], 0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn standard_simplex_measures() {
        let s = Simplex::<f64>::standard(2);
        assert!(close(s.volume(), 3f64.sqrt() / 2.0, 1e-15));
        for &f in s.facet_measures().unwrap() {
            assert!(close(f, 2f64.sqrt(), 1e-15));
        }
        assert!(close(s.perimeter().unwrap(), 3.0 * 2f64.sqrt(), 1e-15));
        assert!(close(s.inradius().unwrap(), 1.0 / 6f64.sqrt(), 1e-15));
        for &c in s.incentre().unwrap() {
            assert!(close(c, 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn main_hole_measures() {
        let h = main_hole();
        let full = Simplex::<f64>::standard(2);
        assert!(close(h.volume(), full.volume() / 4.0, 1e-15));
        for &f in h.facet_measures().unwrap() {
            assert!(close(f, 2f64.sqrt() / 2.0, 1e-15));
        }
        assert!(close(h.inradius().unwrap(), 0.5 / 6f64.sqrt(), 1e-15));
        assert!((h.inradius().unwrap() - 0.20412).abs() < 1e-5);
        for &c in h.incentre().unwrap() {
            assert!(close(c, 1.0 / 3.0, 1e-15));
        }
    }

    #[test]
    fn repeated_vertex_is_degenerate() {
        let s = Simplex::new(vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.volume(), 0.0);
        assert!(matches!(s.facet_measures(), Err(Error::Degenerate(_))));
        assert!(s.inradius().is_err());
        assert!(s.incentre().is_err());
    }

    #[test]
    fn inner_neighborhood_examples() {
        let s = main_hole();
        let r = s.inradius().unwrap();
        assert_eq!(s.inner_neighborhood_volume(0.0).unwrap(), 0.0);
        assert!(close(s.inner_neighborhood_volume(r).unwrap(), s.volume(), 1e-15));
        assert!(close(s.inner_neighborhood_volume(r / 2.0).unwrap(), 0.75 * s.volume(), 1e-15));
        assert!(s.inner_neighborhood_volume(-1e-3).is_err());
    }

    #[test]
    fn images_of_the_standard_simplex() {
        let gens = GeneratorSet::rauzy();
        let n1 = MatrixProduct::of_word(&gens, &Word::new(vec![0], 3).unwrap()).unwrap();
        let full = Simplex::<f64>::standard(2);
        let img = image_simplex(&n1, &full).unwrap();
        let want = [[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5]];
        for (v, w) in img.vertices().iter().zip(want) {
            for (a, b) in v.iter().zip(w) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        assert!(close(volume_ratio(&n1, &full).unwrap(), 0.25, 1e-15));

        let id = MatrixProduct::identity(3);
        assert_eq!(image_simplex(&id, &full).unwrap(), full);
        assert_eq!(volume_ratio(&id, &full).unwrap(), 1.0);

        let m = hole_matrix();
        let hole = image_simplex(&m, &full).unwrap();
        let want = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]];
        for (v, w) in hole.vertices().iter().zip(want) {
            for (a, b) in v.iter().zip(w) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        assert!(close(volume_ratio(&m, &full).unwrap(), 0.25, 1e-14));
    }

    #[test]
    fn scaling_about_incentre_scales_inradius() {
        let s = Simplex::new(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.8, 0.1], vec![0.2, 0.1, 0.7]]).unwrap();
        let r = s.inradius().unwrap();
        let t = s.scaled_about_incentre(0.3).unwrap();
        assert!(close(t.inradius().unwrap(), 0.3 * r, 1e-13));
        for (a, b) in t.incentre().unwrap().iter().zip(s.incentre().unwrap()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn incentre_is_equidistant_from_facets() {
        let s = Simplex::new(vec![
            vec![0.6, 0.1, 0.2, 0.1],
            vec![0.1, 0.5, 0.2, 0.2],
            vec![0.2, 0.1, 0.6, 0.1],
            vec![0.05, 0.15, 0.1, 0.7],
        ])
        .unwrap();
        let r = s.inradius().unwrap();
        for dist in s.facet_distances(s.incentre().unwrap()).unwrap() {
            assert!(close(dist, r, 1e-10));
        }
    }

    #[test]
    fn works_in_single_precision() {
        let s = Simplex::<f32>::standard(2);
        assert!((s.inradius().unwrap() - 1.0 / 6f32.sqrt()).abs() < 1e-6);
        assert!((s.volume() - 3f32.sqrt() / 2.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn volume_formula_matches_image_determinant(letters in prop::collection::vec(0u16..3, 0..=15)) {
            let gens = GeneratorSet::rauzy();
            let p = MatrixProduct::of_word(&gens, &Word::new(letters, 3).unwrap()).unwrap();
            let base = main_hole();
            let direct = image_simplex(&p, &base).unwrap().log_volume();
            let chained = base.log_volume() + log_volume_ratio(&p, &base).unwrap();
            prop_assert!((direct - chained).abs() < 1e-9);
        }
    }
}
