//! Finite-dimensional unital algebras given by structure constants.
//!
//! An algebra of dimension n over an exact domain is the data of a cube
//! c[i][j][k] meaning e_i·e_j = Σ_k c[i][j][k] e_k together with the
//! coordinates of the unit. The unit axiom is checked at construction and
//! the associativity flag is computed once by an exhaustive basis-triple
//! check and stored (non-associative tables are representable; operations
//! that require associativity refuse them).

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::scalars::{span_contains, vec_add, vec_is_zero, vec_scale, vec_sub, Domain, Matrix, Scalar};
use crate::{Error, Result};

/// Default cap on basis size; exhaustive triple checks are O(dim^4)-O(dim^5).
pub const MAX_DIM: usize = 64;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of an algebra instance, used to detect parent mismatches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraId(u64);

/// Element of a [`StructureAlgebra`], a coordinate vector over its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    pub(crate) parent: AlgebraId,
    pub coords: Vec<Scalar>,
}

/// Finite-dimensional unital algebra over an exact field, by structure constants.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    id: AlgebraId,
    label: String,
    domain: Domain,
    dim: usize,
    unit: Vec<Scalar>,
    /// flat cube, i-major j-middle k-minor: entry (i*dim + j)*dim + k
    sc: Vec<Scalar>,
    /// first failing basis triple (i,j,k), or None when associative
    assoc_witness: Option<(usize, usize, usize)>,
}

impl StructureAlgebra {
    pub fn new(
        label: &str,
        domain: Domain,
        dim: usize,
        unit: Vec<Scalar>,
        structconsts: Vec<Scalar>,
    ) -> Result<StructureAlgebra> {
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be >= 1".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "algebra dimension {dim} exceeds cap {MAX_DIM}"
            )));
        }
        if unit.len() != dim {
            return Err(Error::InvalidInput(format!(
                "unit vector length {} != dim {dim}",
                unit.len()
            )));
        }
        if structconsts.len() != dim * dim * dim {
            return Err(Error::InvalidInput(format!(
                "structure constants length {} != dim^3 = {}",
                structconsts.len(),
                dim * dim * dim
            )));
        }
        for s in unit.iter().chain(structconsts.iter()) {
            if s.domain() != domain {
                return Err(Error::DomainMismatch(format!(
                    "entry in {} but algebra declared over {domain}",
                    s.domain()
                )));
            }
        }
        let mut alg = StructureAlgebra {
            id: AlgebraId(NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed)),
            label: label.to_string(),
            domain,
            dim,
            unit,
            sc: structconsts,
            assoc_witness: None,
        };
        // unit axiom on every basis vector
        for k in 0..dim {
            let e = alg.basis_coords(k);
            let left = alg.mul_coords(&alg.unit, &e);
            let right = alg.mul_coords(&e, &alg.unit);
            if left != e || right != e {
                return Err(Error::ValidationFailed(format!(
                    "unit axiom fails on basis element {k} of {label}"
                )));
            }
        }
        alg.assoc_witness = alg.find_assoc_violation();
        Ok(alg)
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_coords(&self) -> &[Scalar] {
        &self.unit
    }

    /// c[i][j][·] as a slice of length dim.
    pub fn table_row(&self, i: usize, j: usize) -> &[Scalar] {
        let base = (i * self.dim + j) * self.dim;
        &self.sc[base..base + self.dim]
    }

    pub fn structconsts(&self) -> &[Scalar] {
        &self.sc
    }

    fn basis_coords(&self, k: usize) -> Vec<Scalar> {
        let mut v = vec![self.domain.zero(); self.dim];
        v[k] = self.domain.one();
        v
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<AlgElement> {
        if coords.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "coordinate length {} != dim {}",
                coords.len(),
                self.dim
            )));
        }
        for c in &coords {
            if c.domain() != self.domain {
                return Err(Error::DomainMismatch(format!(
                    "coordinate in {} for algebra over {}",
                    c.domain(),
                    self.domain
                )));
            }
        }
        Ok(AlgElement {
            parent: self.id,
            coords,
        })
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            parent: self.id,
            coords: vec![self.domain.zero(); self.dim],
        }
    }

    pub fn one(&self) -> AlgElement {
        AlgElement {
            parent: self.id,
            coords: self.unit.clone(),
        }
    }

    pub fn basis_element(&self, k: usize) -> AlgElement {
        AlgElement {
            parent: self.id,
            coords: self.basis_coords(k),
        }
    }

    pub fn basis(&self) -> Vec<AlgElement> {
        (0..self.dim).map(|k| self.basis_element(k)).collect()
    }

    /// Element `s·1`.
    pub fn scalar_element(&self, s: &Scalar) -> AlgElement {
        AlgElement {
            parent: self.id,
            coords: vec_scale(s, &self.unit),
        }
    }

    pub(crate) fn check_parent(&self, x: &AlgElement) -> Result<()> {
        if x.parent != self.id {
            return Err(Error::ParentMismatch(format!(
                "element does not belong to algebra {:?} ({})",
                self.id, self.label
            )));
        }
        Ok(())
    }

    fn mul_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.domain.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi.mul(yj);
                let row = self.table_row(i, j);
                for (k, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    out[k] = out[k].add(&s.mul(c));
                }
            }
        }
        out
    }

    /// Bilinear product Σ x_i y_j c[i][j][·].
    pub fn multiply(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(AlgElement {
            parent: self.id,
            coords: self.mul_coords(&x.coords, &y.coords),
        })
    }

    pub fn add(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(AlgElement {
            parent: self.id,
            coords: vec_add(&x.coords, &y.coords),
        })
    }

    pub fn sub(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(AlgElement {
            parent: self.id,
            coords: vec_sub(&x.coords, &y.coords),
        })
    }

    pub fn scale(&self, s: &Scalar, x: &AlgElement) -> Result<AlgElement> {
        self.check_parent(x)?;
        Ok(AlgElement {
            parent: self.id,
            coords: vec_scale(s, &x.coords),
        })
    }

    pub fn pow(&self, x: &AlgElement, n: u64) -> Result<AlgElement> {
        self.check_parent(x)?;
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    fn find_assoc_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.table_row(i, j).to_vec();
                for k in 0..self.dim {
                    let left = self.mul_coords(&ij, &self.basis_coords(k));
                    let right = self.mul_coords(&self.basis_coords(i), self.table_row(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Cached result of the exhaustive basis-triple check.
    pub fn is_associative(&self) -> bool {
        self.assoc_witness.is_none()
    }

    /// First failing basis triple, when the algebra is not associative.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        self.assoc_witness
    }

    fn require_associative(&self, op: &str) -> Result<()> {
        match self.assoc_witness {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::NotAssociative(format!(
                "{op} requires an associative algebra; {} fails on basis triple ({i},{j},{k})",
                self.label
            ))),
        }
    }

    /// Matrix of left multiplication z ↦ x·z.
    pub fn left_mul_matrix(&self, x: &AlgElement) -> Result<Matrix> {
        self.check_parent(x)?;
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| self.mul_coords(&x.coords, &self.basis_coords(j)))
            .collect();
        Matrix::from_columns(self.dim, self.domain, &cols)
    }

    /// Matrix of right multiplication z ↦ z·x.
    pub fn right_mul_matrix(&self, x: &AlgElement) -> Result<Matrix> {
        self.check_parent(x)?;
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| self.mul_coords(&self.basis_coords(j), &x.coords))
            .collect();
        Matrix::from_columns(self.dim, self.domain, &cols)
    }

    /// Basis of the center {z : z·e_i = e_i·z for all i}. The unit always
    /// lies in the span.
    pub fn center(&self) -> Result<Vec<AlgElement>> {
        self.require_associative("center")?;
        self.centralizer(&self.basis())
    }

    /// Basis of {z : z·g = g·z for all g in gens}.
    pub fn centralizer(&self, gens: &[AlgElement]) -> Result<Vec<AlgElement>> {
        let mut blocks = Vec::new();
        for g in gens {
            self.check_parent(g)?;
            let l = self.left_mul_matrix(g)?;
            let r = self.right_mul_matrix(g)?;
            // z·g - g·z = (R_g - L_g) z
            let diff = Matrix::from_fn(self.dim, self.dim, self.domain, |i, j| {
                r.get(i, j).sub(l.get(i, j))
            });
            blocks.push(diff);
        }
        let kernel = if blocks.is_empty() {
            Matrix::zero(1, self.dim, self.domain).kernel()
        } else {
            Matrix::vstack(&blocks)?.kernel()
        };
        kernel
            .into_iter()
            .map(|coords| self.element(coords))
            .collect()
    }

    /// Two-sided inverse of x, or `None` when the left-multiplication matrix
    /// is singular.
    pub fn try_inverse(&self, x: &AlgElement) -> Result<Option<AlgElement>> {
        self.require_associative("try_inverse")?;
        self.check_parent(x)?;
        let l = self.left_mul_matrix(x)?;
        let Some(y) = l.solve(&self.unit)? else {
            return Ok(None);
        };
        let y = self.element(y)?;
        // in a finite-dimensional unital associative algebra a one-sided
        // inverse is two-sided; verify anyway
        let yx = self.multiply(&y, x)?;
        if yx.coords != self.unit {
            return Err(Error::Internal(format!(
                "one-sided inverse not two-sided in {}",
                self.label
            )));
        }
        Ok(Some(y))
    }

    /// True iff the left-multiplication matrix of x is singular. x must be nonzero.
    pub fn is_zero_divisor(&self, x: &AlgElement) -> Result<bool> {
        self.require_associative("is_zero_divisor")?;
        self.check_parent(x)?;
        if vec_is_zero(&x.coords) {
            return Err(Error::InvalidInput("is_zero_divisor of zero element".into()));
        }
        let l = self.left_mul_matrix(x)?;
        Ok(l.rank() < self.dim)
    }

    /// The inner automorphism z ↦ u z u⁻¹ for invertible u.
    pub fn inner_automorphism(&self, u: &AlgElement) -> Result<AlgMorphism> {
        let Some(u_inv) = self.try_inverse(u)? else {
            return Err(Error::NotInvertible(format!(
                "inner automorphism by a non-invertible element of {}",
                self.label
            )));
        };
        let l = self.left_mul_matrix(u)?;
        let r = self.right_mul_matrix(&u_inv)?;
        let m = r.mat_mul(&l)?;
        AlgMorphism::new_automorphism(self, m)
    }

    /// Membership of x in the span of the given elements.
    pub fn in_span(&self, basis: &[AlgElement], x: &AlgElement) -> Result<bool> {
        self.check_parent(x)?;
        let vecs: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|b| {
                self.check_parent(b)?;
                Ok(b.coords.clone())
            })
            .collect::<Result<_>>()?;
        span_contains(self.dim, self.domain, &vecs, &x.coords)
    }

    /// n-central test: x ∉ C(a), x^n ∈ C(a) and invertible, x^m ∉ C(a) for
    /// 1 ≤ m < n, with C(a) the computed center.
    pub fn is_n_central(&self, x: &AlgElement, n: u64) -> Result<bool> {
        if n == 0 {
            return Err(Error::InvalidInput("is_n_central with n = 0".into()));
        }
        self.check_parent(x)?;
        let center = self.center()?;
        let mut power = x.clone();
        // x^1 .. x^{n-1} must avoid the center (this includes x itself)
        for _ in 1..n {
            if self.in_span(&center, &power)? {
                return Ok(false);
            }
            power = self.multiply(&power, x)?;
        }
        if !self.in_span(&center, &power)? {
            return Ok(false);
        }
        Ok(self.try_inverse(&power)?.is_some())
    }
}

/// Linear map between structure algebras, verified multiplicative and
/// unit-preserving at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgMorphism {
    source: AlgebraId,
    target: AlgebraId,
    matrix: Matrix,
}

impl AlgMorphism {
    /// A homomorphism source → target given by its coordinate matrix
    /// (target.dim × source.dim). Checks unit ↦ unit and multiplicativity on
    /// all basis pairs.
    pub fn new(source: &StructureAlgebra, target: &StructureAlgebra, matrix: Matrix) -> Result<AlgMorphism> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::InvalidInput(format!(
                "morphism matrix is {}x{}, want {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.domain() != source.domain() || source.domain() != target.domain() {
            return Err(Error::DomainMismatch("morphism between different domains".into()));
        }
        let unit_image = matrix.mul_vec(source.unit_coords())?;
        if unit_image != target.unit_coords() {
            return Err(Error::ValidationFailed(format!(
                "morphism {} -> {} does not map unit to unit",
                source.label(),
                target.label()
            )));
        }
        let cols: Vec<Vec<Scalar>> = (0..source.dim()).map(|j| matrix.column(j)).collect();
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let prod_image = matrix.mul_vec(source.table_row(i, j))?;
                let image_prod = target.mul_coords(&cols[i], &cols[j]);
                if prod_image != image_prod {
                    return Err(Error::ValidationFailed(format!(
                        "morphism {} -> {} not multiplicative on basis pair ({i},{j})",
                        source.label(),
                        target.label()
                    )));
                }
            }
        }
        Ok(AlgMorphism {
            source: source.id(),
            target: target.id(),
            matrix,
        })
    }

    /// Endomorphism that must also be invertible.
    pub fn new_automorphism(alg: &StructureAlgebra, matrix: Matrix) -> Result<AlgMorphism> {
        let m = AlgMorphism::new(alg, alg, matrix)?;
        if m.matrix.inverse()?.is_none() {
            return Err(Error::NotInvertible(format!(
                "declared automorphism of {} has singular matrix",
                alg.label()
            )));
        }
        Ok(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source_id(&self) -> AlgebraId {
        self.source
    }

    pub fn target_id(&self) -> AlgebraId {
        self.target
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &AlgElement) -> Result<AlgElement> {
        if x.parent != self.source {
            return Err(Error::ParentMismatch(
                "morphism applied to element of a different algebra".into(),
            ));
        }
        Ok(AlgElement {
            parent: self.target,
            coords: self.matrix.mul_vec(&x.coords)?,
        })
    }

    /// self ∘ other (apply `other` first). Requires other.target = self.source.
    pub fn compose(&self, other: &AlgMorphism) -> Result<AlgMorphism> {
        if other.target != self.source {
            return Err(Error::ParentMismatch("morphism composition mismatch".into()));
        }
        Ok(AlgMorphism {
            source: other.source,
            target: self.target,
            matrix: self.matrix.mat_mul(&other.matrix)?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.matrix.is_identity()
    }

    /// Inverse of an invertible endomorphism.
    pub fn inverse(&self) -> Result<AlgMorphism> {
        let Some(inv) = self.matrix.inverse()? else {
            return Err(Error::NotInvertible("morphism matrix is singular".into()));
        };
        Ok(AlgMorphism {
            source: self.target,
            target: self.source,
            matrix: inv,
        })
    }

    pub fn iterate(&self, n: u64) -> Result<AlgMorphism> {
        if self.source != self.target {
            return Err(Error::InvalidInput("iterating a non-endomorphism".into()));
        }
        let mut acc = AlgMorphism {
            source: self.source,
            target: self.target,
            matrix: Matrix::identity(self.matrix.rows(), self.matrix.domain()),
        };
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Least k ≥ 1 with f^k = id, searching up to a dim-dependent cap;
    /// `None` when the cap is exceeded. The morphism must be an invertible
    /// endomorphism.
    pub fn multiplicative_order(&self) -> Result<Option<u64>> {
        if self.source != self.target {
            return Err(Error::InvalidInput("order of a non-endomorphism".into()));
        }
        if self.matrix.inverse()?.is_none() {
            return Err(Error::NotInvertible("order of a singular morphism".into()));
        }
        let cap = 8 * self.matrix.rows() as u64 + 8;
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.matrix.is_identity() {
                return Ok(Some(k));
            }
            acc = self.compose(&acc)?;
        }
        Ok(None)
    }
}

/// Shared handle used by ring contexts and products that hold an algebra.
pub type AlgebraHandle = Arc<StructureAlgebra>;
