//! Field extensions M/F presented on a power basis with verified
//! automorphism lists.
//!
//! Automorphisms are supplied (or taken from the catalog) and verified —
//! never searched for over Q: each image of the generator must be a root of
//! the minimal polynomial and the induced linear map must be multiplicative
//! and unit-preserving. Irreducibility of the minimal polynomial is
//! certified exactly for degree ≤ 3 over Q (rational root test) and for all
//! degrees over F_p when p^deg ≤ 10^6 (exhaustive factor scan up to
//! deg/2); otherwise it is recorded as asserted, and any later zero-divisor
//! discovery in the carrier reports that flag.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fgalg::{AlgElement, AlgMorphism, StructureAlgebra};
use crate::groups::FiniteGroup;
use crate::scalars::{spans_equal, vec_is_zero, Domain, Matrix, Scalar};
use crate::{Error, Result};

/// Whether the minimal polynomial was proven irreducible or only asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified,
    Asserted,
}

/// A named, verified automorphism of the carrier.
#[derive(Clone, Debug)]
pub struct NamedAut {
    pub name: String,
    pub map: AlgMorphism,
    pub theta_image: AlgElement,
}

/// Field extension M/F on the power basis 1, θ, …, θ^{n−1}.
#[derive(Clone, Debug)]
pub struct FieldExtension {
    carrier: Arc<StructureAlgebra>,
    minpoly: Vec<Scalar>,
    degree: usize,
    automorphisms: Vec<NamedAut>,
    base: Domain,
    irreducibility: Irreducibility,
}

/// Subfield of the carrier given by a basis closed under multiplication.
#[derive(Clone, Debug)]
pub struct SubfieldHandle {
    pub basis: Vec<AlgElement>,
    pub degree: usize,
    /// n × degree matrix whose columns are the basis coordinates
    pub embedding: Matrix,
}

impl FieldExtension {
    /// Build base[x]/(minpoly) with the given automorphism images of θ.
    /// The identity automorphism is always present (added if not listed).
    pub fn make_extension(
        label: &str,
        base: Domain,
        minpoly: Vec<Scalar>,
        automorphism_images: &[(String, Vec<Scalar>)],
    ) -> Result<FieldExtension> {
        if minpoly.len() < 2 {
            return Err(Error::InvalidInput("minimal polynomial must have degree >= 1".into()));
        }
        let n = minpoly.len() - 1;
        if !minpoly[n].is_one() {
            return Err(Error::InvalidInput("minimal polynomial must be monic".into()));
        }
        for c in &minpoly {
            if c.domain() != base {
                return Err(Error::DomainMismatch("minpoly coefficient outside base domain".into()));
            }
        }
        let irreducibility = certify_irreducible(base, &minpoly)?;

        // θ^k mod minpoly for k = 0 .. 2n-2
        let mut powers: Vec<Vec<Scalar>> = Vec::with_capacity(2 * n - 1);
        let mut e0 = vec![base.zero(); n];
        e0[0] = base.one();
        powers.push(e0);
        for k in 1..=2 * n - 2 {
            let prev = &powers[k - 1];
            // multiply by θ: shift, then reduce the overflow via θ^n = -(a_0 + ... + a_{n-1}θ^{n-1})
            let mut next = vec![base.zero(); n];
            for i in 0..n - 1 {
                next[i + 1] = prev[i].clone();
            }
            let carry = prev[n - 1].clone();
            if !carry.is_zero() {
                for i in 0..n {
                    next[i] = next[i].sub(&carry.mul(&minpoly[i]));
                }
            }
            powers.push(next);
        }

        let mut sc = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                sc.extend(powers[i + j].iter().cloned());
            }
        }
        let mut unit = vec![base.zero(); n];
        unit[0] = base.one();
        let carrier = Arc::new(StructureAlgebra::new(label, base, n, unit, sc)?);
        if !carrier.is_associative() {
            return Err(Error::Internal("power-basis carrier not associative".into()));
        }
        // commutativity of the carrier
        for i in 0..n {
            for j in 0..n {
                if carrier.table_row(i, j) != carrier.table_row(j, i) {
                    return Err(Error::Internal("power-basis carrier not commutative".into()));
                }
            }
        }
        // minpoly(θ) = 0 in the carrier
        let theta = carrier.basis_element(1.min(n - 1));
        let ext_partial = FieldExtension {
            carrier: carrier.clone(),
            minpoly: minpoly.clone(),
            degree: n,
            automorphisms: Vec::new(),
            base,
            irreducibility,
        };
        if n > 1 && !vec_is_zero(&ext_partial.eval_minpoly(&theta)?.coords) {
            return Err(Error::Internal("generator is not a root of its minimal polynomial".into()));
        }

        let mut auts: Vec<NamedAut> = Vec::new();
        let theta_coords = theta.coords.clone();
        let mut saw_identity = false;
        for (name, image) in automorphism_images {
            let image = carrier.element(image.clone())?;
            let named = ext_partial.build_automorphism(name, image)?;
            if named.theta_image.coords == theta_coords {
                saw_identity = true;
            }
            if auts.iter().any(|a| a.map == named.map) {
                return Err(Error::InvalidInput(format!(
                    "automorphism {name} duplicates an earlier one"
                )));
            }
            auts.push(named);
        }
        if !saw_identity {
            let id = ext_partial.build_automorphism("id", theta.clone())?;
            auts.insert(0, id);
        }
        if auts.len() > n {
            return Err(Error::InvalidInput(format!(
                "{} automorphisms listed for an extension of degree {n}",
                auts.len()
            )));
        }
        Ok(FieldExtension {
            automorphisms: auts,
            ..ext_partial
        })
    }

    fn build_automorphism(&self, name: &str, image: AlgElement) -> Result<NamedAut> {
        let value = self.eval_minpoly(&image)?;
        if !vec_is_zero(&value.coords) {
            return Err(Error::ValidationFailed(format!(
                "image of θ under {name} is not a root of the minimal polynomial"
            )));
        }
        let n = self.degree;
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        let mut pow = self.carrier.one();
        for _ in 0..n {
            cols.push(pow.coords.clone());
            pow = self.carrier.multiply(&pow, &image)?;
        }
        let matrix = Matrix::from_columns(n, self.base, &cols)?;
        let map = AlgMorphism::new_automorphism(&self.carrier, matrix)?;
        Ok(NamedAut {
            name: name.to_string(),
            map,
            theta_image: image,
        })
    }

    fn eval_minpoly(&self, x: &AlgElement) -> Result<AlgElement> {
        let mut acc = self.carrier.zero();
        let mut pow = self.carrier.one();
        for c in &self.minpoly {
            acc = self.carrier.add(&acc, &self.carrier.scale(c, &pow)?)?;
            pow = self.carrier.multiply(&pow, x)?;
        }
        Ok(acc)
    }

    pub fn carrier(&self) -> &Arc<StructureAlgebra> {
        &self.carrier
    }

    pub fn minpoly(&self) -> &[Scalar] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Domain {
        self.base
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn automorphisms(&self) -> &[NamedAut] {
        &self.automorphisms
    }

    pub fn automorphism(&self, idx: usize) -> &NamedAut {
        &self.automorphisms[idx]
    }

    pub fn automorphism_by_name(&self, name: &str) -> Result<usize> {
        self.automorphisms
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown automorphism {name:?}")))
    }

    pub fn theta(&self) -> AlgElement {
        if self.degree == 1 {
            self.carrier.basis_element(0)
        } else {
            self.carrier.basis_element(1)
        }
    }

    /// True iff the listed automorphisms exhaust [M:F].
    pub fn is_galois(&self) -> bool {
        self.automorphisms.len() == self.degree
    }

    /// Inverse in the carrier. A nonzero non-invertible element means the
    /// carrier is not a field; the diagnostic names the irreducibility flag.
    pub fn invert(&self, x: &AlgElement) -> Result<AlgElement> {
        match self.carrier.try_inverse(x)? {
            Some(inv) => Ok(inv),
            None if vec_is_zero(&x.coords) => {
                Err(Error::NotInvertible("zero element of the carrier".into()))
            }
            None => match self.irreducibility {
                Irreducibility::Asserted => Err(Error::NotInvertible(format!(
                    "zero divisor in carrier {}: minimal polynomial irreducibility was \
                     asserted, not certified — the asserted flag is wrong",
                    self.carrier.label()
                ))),
                Irreducibility::Certified => Err(Error::Internal(
                    "nonzero non-invertible element in a certified field carrier".into(),
                )),
            },
        }
    }

    /// Cayley table on the listed automorphisms. Fails naming the missing
    /// composite when the list is not closed under composition.
    pub fn aut_group(&self) -> Result<FiniteGroup> {
        let n = self.automorphisms.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let comp = self.automorphisms[i].map.compose(&self.automorphisms[j].map)?;
                let Some(k) = self.automorphisms.iter().position(|a| a.map == comp) else {
                    return Err(Error::ValidationFailed(format!(
                        "automorphism list not closed: {} ∘ {} is missing",
                        self.automorphisms[i].name, self.automorphisms[j].name
                    )));
                };
                table[i][j] = k;
            }
        }
        let labels = self.automorphisms.iter().map(|a| a.name.clone()).collect();
        FiniteGroup::new(labels, table)
    }

    /// Fixed field of a subset H of automorphisms (must be closed under
    /// composition). Returns a basis of {z : σ(z) = z for all σ ∈ H}.
    pub fn fixed_field(&self, subset: &[usize]) -> Result<SubfieldHandle> {
        if subset.is_empty() {
            return Err(Error::InvalidInput("fixed field of an empty set".into()));
        }
        for &i in subset {
            if i >= self.automorphisms.len() {
                return Err(Error::InvalidInput(format!("automorphism index {i} out of range")));
            }
        }
        // subgroup check: closed under composition
        for &i in subset {
            for &j in subset {
                let comp = self.automorphisms[i].map.compose(&self.automorphisms[j].map)?;
                let k = self.automorphisms.iter().position(|a| a.map == comp);
                match k {
                    Some(k) if subset.contains(&k) => {}
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "H is not a subgroup: {} ∘ {} escapes the subset",
                            self.automorphisms[i].name, self.automorphisms[j].name
                        )))
                    }
                }
            }
        }
        let n = self.degree;
        let id = Matrix::identity(n, self.base);
        let blocks: Vec<Matrix> = subset
            .iter()
            .map(|&i| {
                let m = self.automorphisms[i].map.matrix();
                Matrix::from_fn(n, n, self.base, |r, c| m.get(r, c).sub(id.get(r, c)))
            })
            .collect();
        let kernel = Matrix::vstack(&blocks)?.kernel();
        let basis: Vec<AlgElement> = kernel
            .iter()
            .map(|v| self.carrier.element(v.clone()))
            .collect::<Result<_>>()?;
        // closure under multiplication
        for x in &basis {
            for y in &basis {
                let prod = self.carrier.multiply(x, y)?;
                if !self.carrier.in_span(&basis, &prod)? {
                    return Err(Error::Internal("fixed set not closed under multiplication".into()));
                }
            }
        }
        let embedding = Matrix::from_columns(n, self.base, &kernel)?;
        Ok(SubfieldHandle {
            degree: basis.len(),
            basis,
            embedding,
        })
    }

    /// Span-equality of a subfield against explicitly given coordinates.
    pub fn subfield_span_equals(&self, handle: &SubfieldHandle, vectors: &[Vec<Scalar>]) -> Result<bool> {
        let basis: Vec<Vec<Scalar>> = handle.basis.iter().map(|b| b.coords.clone()).collect();
        spans_equal(self.degree, self.base, &basis, vectors)
    }
}

/// Built-in extensions used across the test fixtures and the CLI examples.
///
/// Names: `gauss_Q_i`, `Q_sqrt2`, `Q_sqrt2_sqrt3`, `Q_zeta5`, `Fp2(p)`, `Fp4(p)`.
pub fn catalog(name: &str) -> Result<FieldExtension> {
    let q = Domain::Rational;
    let qi = |v: i64| q.from_i64(v);
    match name {
        "gauss_Q_i" => FieldExtension::make_extension(
            "Q(i)",
            q,
            vec![qi(1), qi(0), qi(1)],
            &[("conj".into(), vec![qi(0), qi(-1)])],
        ),
        "Q_sqrt2" => FieldExtension::make_extension(
            "Q(sqrt2)",
            q,
            vec![qi(-2), qi(0), qi(1)],
            &[("conj".into(), vec![qi(0), qi(-1)])],
        ),
        "Q_sqrt2_sqrt3" => {
            // θ = √2+√3, minpoly x⁴ - 10x² + 1; √2 = (θ³-9θ)/2, √3 = (11θ-θ³)/2
            FieldExtension::make_extension(
                "Q(sqrt2,sqrt3)",
                q,
                vec![qi(1), qi(0), qi(-10), qi(0), qi(1)],
                &[
                    // s1: √2 ↦ -√2, √3 ↦ √3: θ ↦ -θ³ + 10θ
                    ("s1".into(), vec![qi(0), qi(10), qi(0), qi(-1)]),
                    // s2: √2 ↦ √2, √3 ↦ -√3: θ ↦ θ³ - 10θ
                    ("s2".into(), vec![qi(0), qi(-10), qi(0), qi(1)]),
                    // s1s2: θ ↦ -θ
                    ("s1s2".into(), vec![qi(0), qi(-1), qi(0), qi(0)]),
                ],
            )
        }
        "Q_zeta5" => {
            // ζ = ζ_5, minpoly x⁴+x³+x²+x+1; σ: ζ ↦ ζ² generates Z_4
            FieldExtension::make_extension(
                "Q(zeta5)",
                q,
                vec![qi(1), qi(1), qi(1), qi(1), qi(1)],
                &[
                    ("s".into(), vec![qi(0), qi(0), qi(1), qi(0)]),
                    ("s2".into(), vec![qi(-1), qi(-1), qi(-1), qi(-1)]),
                    ("s3".into(), vec![qi(0), qi(0), qi(0), qi(1)]),
                ],
            )
        }
        _ => {
            if let Some(p) = parse_catalog_fp(name, "Fp2(") {
                return finite_field_extension(p, 2);
            }
            if let Some(p) = parse_catalog_fp(name, "Fp4(") {
                return finite_field_extension(p, 4);
            }
            Err(Error::InvalidInput(format!("unknown catalog extension {name:?}")))
        }
    }
}

fn parse_catalog_fp(name: &str, prefix: &str) -> Option<u64> {
    name.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
}

/// F_{p^deg}/F_p with the full Frobenius orbit as automorphism list. The
/// minimal polynomial is the lexicographically first irreducible monic of
/// the requested degree.
pub fn finite_field_extension(p: u64, deg: usize) -> Result<FieldExtension> {
    let base = Domain::prime(p)?;
    let poly = first_irreducible_monic(p, deg).ok_or_else(|| {
        Error::InvalidInput(format!("no irreducible degree-{deg} polynomial found over F_{p}"))
    })?;
    let minpoly: Vec<Scalar> = poly.iter().map(|&c| base.from_i64(c as i64)).collect();
    let label = format!("F_{}^{}", p, deg);
    // Frobenius images: θ^p, then repeated application
    let ext0 = FieldExtension::make_extension(&label, base, minpoly.clone(), &[])?;
    let carrier = ext0.carrier().clone();
    let theta = ext0.theta();
    let mut frob_img = carrier.one();
    for _ in 0..p {
        frob_img = carrier.multiply(&frob_img, &theta)?;
    }
    let frob = ext0.build_automorphism("frob", frob_img.clone())?;
    let mut images: Vec<(String, Vec<Scalar>)> = vec![("frob".into(), frob_img.coords.clone())];
    let mut img = frob_img;
    for k in 2..deg {
        img = frob.map.apply(&img)?;
        images.push((format!("frob{k}"), img.coords.clone()));
    }
    FieldExtension::make_extension(&label, base, minpoly, &images)
}

// ---- irreducibility ------------------------------------------------------

fn certify_irreducible(base: Domain, minpoly: &[Scalar]) -> Result<Irreducibility> {
    let deg = minpoly.len() - 1;
    match base {
        Domain::Rational => {
            if deg == 1 {
                return Ok(Irreducibility::Certified);
            }
            if deg > 3 {
                return Ok(Irreducibility::Asserted);
            }
            // degree 2 or 3: reducible over Q iff there is a rational root
            if has_rational_root(minpoly) {
                Err(Error::InvalidInput(
                    "reducibility detected: minimal polynomial has a rational root".into(),
                ))
            } else {
                Ok(Irreducibility::Certified)
            }
        }
        Domain::Prime(p) => {
            let coeffs: Vec<u64> = minpoly
                .iter()
                .map(|c| match c {
                    Scalar::Prime { residue, .. } => *residue,
                    _ => unreachable!("domain checked by caller"),
                })
                .collect();
            if p.saturating_pow(deg as u32) > 1_000_000 {
                return Ok(Irreducibility::Asserted);
            }
            match find_fp_factor(p, &coeffs) {
                Some(d) => Err(Error::InvalidInput(format!(
                    "reducibility detected: degree-{d} factor over F_{p}"
                ))),
                None => Ok(Irreducibility::Certified),
            }
        }
    }
}

fn has_rational_root(minpoly: &[Scalar]) -> bool {
    // clear denominators to an integer polynomial, then try all ±p/q with
    // p | constant, q | leading
    let rats: Vec<_> = minpoly
        .iter()
        .map(|c| match c {
            Scalar::Rational(r) => r.clone(),
            _ => unreachable!(),
        })
        .collect();
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let eval = |num: &BigInt, den: &BigInt| -> bool {
        // p(num/den) scaled by den^deg
        let mut acc = BigInt::zero();
        let mut num_pow = BigInt::one();
        let deg = ints.len() - 1;
        let mut den_pows = vec![BigInt::one(); deg + 1];
        for i in 1..=deg {
            den_pows[i] = &den_pows[i - 1] * den;
        }
        for (i, c) in ints.iter().enumerate() {
            acc += c * &num_pow * &den_pows[deg - i];
            num_pow *= num;
        }
        acc.is_zero()
    };
    let constant = ints[0].abs();
    let leading = ints[ints.len() - 1].abs();
    if constant.is_zero() {
        return true; // root at 0
    }
    for p in divisors(&constant) {
        for q in divisors(&leading) {
            if p.gcd(&q) != BigInt::one() {
                continue;
            }
            if eval(&p, &q) || eval(&(-&p), &q) {
                return true;
            }
        }
    }
    false
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

// small dense polynomials over F_p, ascending coefficients
fn fp_poly_eval(p: u64, poly: &[u64], x: u64) -> u64 {
    let mut acc = 0u64;
    for c in poly.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

fn fp_poly_rem(p: u64, num: &[u64], den: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = mod_pow(den[dd], p - 2, p);
    while r.len() > dd {
        let shift = r.len() - 1 - dd;
        let factor = (r[r.len() - 1] * lead_inv) % p;
        if factor != 0 {
            for i in 0..=dd {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (factor * den[i]) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Smallest degree of a proper monic factor (scanning degrees 1..=deg/2),
/// or `None` when irreducible.
fn find_fp_factor(p: u64, poly: &[u64]) -> Option<usize> {
    let deg = poly.len() - 1;
    for x in 0..p {
        if fp_poly_eval(p, poly, x) == 0 {
            return Some(1);
        }
    }
    for d in 2..=deg / 2 {
        let mut divisor = vec![0u64; d + 1];
        divisor[d] = 1;
        loop {
            if fp_poly_rem(p, poly, &divisor).iter().all(|&c| c == 0) {
                return Some(d);
            }
            // next monic polynomial of degree d (odometer over low coefficients)
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                divisor[i] += 1;
                if divisor[i] < p {
                    break;
                }
                divisor[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    None
}

fn first_irreducible_monic(p: u64, deg: usize) -> Option<Vec<u64>> {
    let mut poly = vec![0u64; deg + 1];
    poly[deg] = 1;
    loop {
        if find_fp_factor(p, &poly).is_none() {
            return Some(poly);
        }
        let mut i = 0;
        loop {
            if i == deg {
                return None;
            }
            poly[i] += 1;
            if poly[i] < p {
                break;
            }
            poly[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(v: i64) -> Scalar {
        Domain::Rational.from_i64(v)
    }

    #[test]
    fn gauss_extension_with_conjugation() {
        let e = catalog("gauss_Q_i").unwrap();
        assert_eq!(e.degree(), 2);
        assert_eq!(e.automorphisms().len(), 2);
        assert!(e.is_galois());
        assert_eq!(e.irreducibility(), Irreducibility::Certified);
        let conj = &e.automorphisms()[e.automorphism_by_name("conj").unwrap()];
        let i = e.theta();
        assert_eq!(conj.map.apply(&i).unwrap().coords, vec![qi(0), qi(-1)]);
        assert_eq!(conj.map.multiplicative_order().unwrap(), Some(2));
    }

    #[test]
    fn image_must_be_a_root() {
        let err = FieldExtension::make_extension(
            "bad",
            Domain::Rational,
            vec![qi(1), qi(0), qi(1)],
            &[("x".into(), vec![qi(1), qi(1)])],
        );
        assert!(matches!(err, Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn non_monic_and_reducible_rejected() {
        let err = FieldExtension::make_extension(
            "bad",
            Domain::Rational,
            vec![qi(1), qi(0), qi(2)],
            &[],
        );
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        // x² - 1 has the rational root 1
        let err = FieldExtension::make_extension(
            "bad",
            Domain::Rational,
            vec![qi(-1), qi(0), qi(1)],
            &[],
        );
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn klein_four_extension() {
        let e = catalog("Q_sqrt2_sqrt3").unwrap();
        assert_eq!(e.degree(), 4);
        assert!(e.is_galois());
        assert_eq!(e.irreducibility(), Irreducibility::Asserted);
        let g = e.aut_group().unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        // every non-identity automorphism has order 2: Klein four group
        for i in 0..4 {
            if i != g.identity() {
                assert_eq!(g.element_order(i), 2);
            }
        }
    }

    #[test]
    fn zeta5_is_cyclic_of_order_4() {
        let e = catalog("Q_zeta5").unwrap();
        assert!(e.is_galois());
        let g = e.aut_group().unwrap();
        assert_eq!(g.order(), 4);
        let s = e.automorphism_by_name("s").unwrap();
        assert_eq!(g.element_order(s), 4);
        assert_eq!(
            e.automorphisms()[s].map.multiplicative_order().unwrap(),
            Some(4)
        );
    }

    #[test]
    fn f9_with_frobenius() {
        let e = catalog("Fp2(3)").unwrap();
        assert_eq!(e.degree(), 2);
        assert!(e.is_galois());
        assert_eq!(e.irreducibility(), Irreducibility::Certified);
        // first irreducible monic quadratic over F_3 is x² + 1, so θ² = -1
        // and the Frobenius sends θ ↦ θ³ = -θ
        let f3 = Domain::prime(3).unwrap();
        assert_eq!(e.minpoly().to_vec(), vec![f3.one(), f3.zero(), f3.one()]);
        let frob = &e.automorphisms()[e.automorphism_by_name("frob").unwrap()];
        assert_eq!(
            frob.theta_image.coords,
            vec![f3.zero(), f3.from_i64(-1)]
        );
    }

    #[test]
    fn fp4_frobenius_orbit() {
        let e = catalog("Fp4(3)").unwrap();
        assert_eq!(e.degree(), 4);
        assert!(e.is_galois());
        let g = e.aut_group().unwrap();
        let frob = e.automorphism_by_name("frob").unwrap();
        assert_eq!(g.element_order(frob), 4);
    }

    #[test]
    fn fixed_fields() {
        let e = catalog("gauss_Q_i").unwrap();
        let id = e.automorphism_by_name("id").unwrap();
        let conj = e.automorphism_by_name("conj").unwrap();
        // H = {id}: all of M
        assert_eq!(e.fixed_field(&[id]).unwrap().degree, 2);
        // H = ⟨conj⟩: Q
        let fix = e.fixed_field(&[id, conj]).unwrap();
        assert_eq!(fix.degree, 1);
        assert!(e
            .subfield_span_equals(&fix, &[vec![qi(1), qi(0)]])
            .unwrap());
    }

    #[test]
    fn zeta5_degree_two_subfield() {
        let e = catalog("Q_zeta5").unwrap();
        let id = e.automorphism_by_name("id").unwrap();
        let s2 = e.automorphism_by_name("s2").unwrap();
        let fix = e.fixed_field(&[id, s2]).unwrap();
        assert_eq!(fix.degree, 2);
        // spanned by {1, ζ + ζ⁴}; ζ⁴ = -1-ζ-ζ²-ζ³
        let one = vec![qi(1), qi(0), qi(0), qi(0)];
        let zeta_plus_conj = vec![qi(-1), qi(0), qi(-1), qi(-1)];
        assert!(e.subfield_span_equals(&fix, &[one, zeta_plus_conj]).unwrap());
    }

    #[test]
    fn galois_correspondence_on_catalog() {
        for name in ["gauss_Q_i", "Q_sqrt2_sqrt3", "Q_zeta5", "Fp2(3)", "Fp2(5)"] {
            let e = catalog(name).unwrap();
            let g = e.aut_group().unwrap();
            for idx in 0..e.automorphisms().len() {
                // subgroup generated by σ
                let mut h = vec![g.identity()];
                let mut acc = idx;
                while acc != g.identity() {
                    h.push(acc);
                    acc = g.mul(acc, idx);
                }
                let fix = e.fixed_field(&h).unwrap();
                let order = g.element_order(idx) as usize;
                assert_eq!(
                    fix.degree * order,
                    e.degree(),
                    "Galois correspondence fails for {name} at automorphism {idx}"
                );
            }
        }
    }

    #[test]
    fn klein_tower_property() {
        let e = catalog("Q_sqrt2_sqrt3").unwrap();
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(e.fixed_field(&all).unwrap().degree, 1); // Fix(G) = Q
        let id = e.automorphism_by_name("id").unwrap();
        let s1 = e.automorphism_by_name("s1").unwrap();
        assert_eq!(e.fixed_field(&[id, s1]).unwrap().degree, 2);
    }

    #[test]
    fn non_galois_cubic() {
        // Q(2^{1/3}) with only the identity: x³ - 2 is irreducible
        let e = FieldExtension::make_extension(
            "Q(cbrt2)",
            Domain::Rational,
            vec![qi(-2), qi(0), qi(0), qi(1)],
            &[],
        )
        .unwrap();
        assert_eq!(e.irreducibility(), Irreducibility::Certified);
        assert!(!e.is_galois());
        assert_eq!(e.automorphisms().len(), 1);
    }

    #[test]
    fn aut_closure_failure_names_composite() {
        // Q(ζ5) with only σ listed: σ∘σ is missing
        let e = FieldExtension::make_extension(
            "partial",
            Domain::Rational,
            vec![qi(1), qi(1), qi(1), qi(1), qi(1)],
            &[("s".into(), vec![qi(0), qi(0), qi(1), qi(0)])],
        )
        .unwrap();
        match e.aut_group() {
            Err(Error::ValidationFailed(msg)) => assert!(msg.contains("s ∘ s")),
            other => panic!("expected closure failure, got {other:?}"),
        }
    }

    #[test]
    fn fixed_field_requires_subgroup() {
        let e = catalog("Q_zeta5").unwrap();
        let s = e.automorphism_by_name("s").unwrap();
        // {id, s} is not closed: s² escapes
        let id = e.automorphism_by_name("id").unwrap();
        assert!(matches!(
            e.fixed_field(&[id, s]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn automorphisms_are_multiplicative_on_basis_pairs() {
        for name in ["Q_sqrt2_sqrt3", "Q_zeta5", "Fp2(5)"] {
            let e = catalog(name).unwrap();
            let c = e.carrier();
            for aut in e.automorphisms() {
                for i in 0..e.degree() {
                    for j in 0..e.degree() {
                        let x = c.basis_element(i);
                        let y = c.basis_element(j);
                        let lhs = aut.map.apply(&c.multiply(&x, &y).unwrap()).unwrap();
                        let rhs = c
                            .multiply(&aut.map.apply(&x).unwrap(), &aut.map.apply(&y).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
                // σ(θ) is a root of the minimal polynomial
                let img = aut.map.apply(&e.theta()).unwrap();
                assert!(vec_is_zero(&e.eval_minpoly(&img).unwrap().coords));
            }
        }
    }
}
