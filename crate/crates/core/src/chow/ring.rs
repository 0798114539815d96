use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{ChowClass, ChowError};
use crate::Rational;

/// A named basis element of a Chow ring together with its codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub codim: usize,
}

/// Sparse product row: `(basis index, coefficient)` pairs.
pub(crate) type Sparse = Vec<(usize, Rational)>;

/// Finite presentation of a graded Chow ring `A_*V ⊗ Q`.
///
/// The basis is ordered by codimension with the fundamental class `[V]` at
/// index 0. Products are stored as exact structure constants. Rings built for
/// singular varieties may be *group-only*: they carry a basis, degree map and
/// push-forward targets, but no multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowRing {
    label: String,
    dim: usize,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
    products: Option<Vec<Vec<Sparse>>>,
    degree: Vec<Rational>,
    tangent_chern: Option<Vec<Rational>>,
    point: Option<Vec<Rational>>,
}

/// Raw presentation data accepted by [`ChowRing::from_parts`].
pub struct RingParts {
    pub label: String,
    pub dim: usize,
    pub basis: Vec<BasisElement>,
    /// Dense structure constants `products[i][j][k]`, or `None` for a
    /// group-only presentation.
    pub products: Option<Vec<Vec<Vec<Rational>>>>,
    /// Degree of each basis element (only top-codimension entries matter).
    pub degree: Vec<Option<Rational>>,
    pub tangent_chern: Option<Vec<Rational>>,
    pub point: Option<Vec<Rational>>,
}

impl ChowRing {
    /// Validates a presentation: grading, commutativity, associativity, unit,
    /// degree map on the top piece, and shape of the stored Chern class.
    pub fn from_parts(parts: RingParts) -> Result<ChowRing, ChowError> {
        let RingParts {
            label,
            dim,
            basis,
            products,
            degree,
            tangent_chern,
            point,
        } = parts;
        let n = basis.len();
        let perr = |msg: String| ChowError::Presentation(format!("{label}: {msg}"));

        if n == 0 || basis[0].codim != 0 {
            return Err(perr("basis must start with the fundamental class".into()));
        }
        if basis.iter().skip(1).any(|b| b.codim == 0) {
            return Err(perr("more than one codimension-0 basis element".into()));
        }
        if basis.windows(2).any(|w| w[0].codim > w[1].codim) {
            return Err(perr("basis not ordered by codimension".into()));
        }
        if let Some(b) = basis.iter().find(|b| b.codim > dim) {
            return Err(perr(format!("grading violation: {} has codimension > {dim}", b.name)));
        }
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if crate::exactnum::parse_ratfunc::<Rational>(&b.name).is_ok() {
                return Err(perr(format!("basis name {:?} collides with a coefficient", b.name)));
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(perr(format!("duplicate basis name {}", b.name)));
            }
        }
        if degree.len() != n {
            return Err(perr("degree table has wrong length".into()));
        }
        let mut deg = Vec::with_capacity(n);
        for (b, d) in basis.iter().zip(degree) {
            match d {
                Some(v) if b.codim == dim => deg.push(v),
                None if b.codim == dim => {
                    return Err(perr(format!("missing degree for top-codimension element {}", b.name)))
                }
                _ => deg.push(Rational::zero()),
            }
        }
        for v in tangent_chern.iter().chain(point.iter()) {
            if v.len() != n {
                return Err(perr("class vector has wrong length".into()));
            }
        }
        if let Some(c) = &tangent_chern {
            if !c[0].is_one() {
                return Err(perr("tangent Chern class must have [V]-coefficient 1".into()));
            }
        }
        if let Some(p) = &point {
            if p.iter().zip(&basis).any(|(c, b)| !c.is_zero() && b.codim != dim) {
                return Err(perr("point class is not of top codimension".into()));
            }
        }

        let sparse = match products {
            None => None,
            Some(table) => Some(validate_products(&basis, dim, table).map_err(perr)?),
        };

        Ok(ChowRing {
            label,
            dim,
            basis,
            index,
            products: sparse,
            degree: deg,
            tangent_chern,
            point,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn codim(&self, i: usize) -> usize {
        self.basis[i].codim
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn fundamental_name(&self) -> &str {
        &self.basis[0].name
    }

    pub fn has_products(&self) -> bool {
        self.products.is_some()
    }

    /// Degree of basis element `i` (zero off the top codimension).
    pub fn degree_of_basis(&self, i: usize) -> &Rational {
        &self.degree[i]
    }

    pub(crate) fn product_row(&self, i: usize, j: usize) -> Result<&Sparse, ChowError> {
        self.products
            .as_ref()
            .map(|t| &t[i][j])
            .ok_or_else(|| ChowError::NoRingStructure(self.label.clone()))
    }

    /// Structure constants of `b_i · b_j` as a dense vector.
    pub fn product_vector(&self, i: usize, j: usize) -> Result<Vec<Rational>, ChowError> {
        let mut out = vec![Rational::zero(); self.rank()];
        for (k, c) in self.product_row(i, j)? {
            out[*k] = c.clone();
        }
        Ok(out)
    }

    pub(crate) fn tangent_chern_raw(&self) -> Option<&[Rational]> {
        self.tangent_chern.as_deref()
    }

    pub(crate) fn point_raw(&self) -> Option<&[Rational]> {
        self.point.as_deref()
    }

    /// Indices of basis elements of codimension `k`.
    pub fn codim_indices(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.basis
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.codim == k)
            .map(|(i, _)| i)
    }

    /// `c(TV) ∩ [V]`.
    pub fn tangent_chern(self: &Arc<Self>) -> Result<ChowClass, ChowError> {
        let raw = self
            .tangent_chern
            .as_ref()
            .ok_or_else(|| ChowError::MissingData(format!("{}: no tangent Chern class", self.label)))?;
        Ok(ChowClass::from_rationals(self.clone(), raw))
    }

    /// Class of a point (degree-one class of top codimension).
    pub fn point_class(self: &Arc<Self>) -> Result<ChowClass, ChowError> {
        let raw = self
            .point
            .as_ref()
            .ok_or_else(|| ChowError::MissingData(format!("{}: no designated point class", self.label)))?;
        Ok(ChowClass::from_rationals(self.clone(), raw))
    }

    pub fn fundamental(self: &Arc<Self>) -> ChowClass {
        ChowClass::basis(self.clone(), 0)
    }

    /// Same ring, either the same allocation or structurally identical.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Copy with basis names rewritten by `f` (used to disambiguate factors).
    pub fn renamed(&self, f: impl Fn(&str) -> String, label: String) -> ChowRing {
        let basis: Vec<BasisElement> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| BasisElement {
                name: if i == 0 { b.name.clone() } else { f(&b.name) },
                codim: b.codim,
            })
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.clone(), i))
            .collect();
        ChowRing {
            label,
            basis,
            index,
            ..self.clone()
        }
    }

    /// Copy carrying the given tangent Chern class.
    pub fn with_tangent_chern(&self, c: Vec<Rational>) -> Result<ChowRing, ChowError> {
        if c.len() != self.rank() || !c[0].is_one() {
            return Err(ChowError::Presentation(format!(
                "{}: malformed tangent Chern class",
                self.label
            )));
        }
        Ok(ChowRing {
            tangent_chern: Some(c),
            ..self.clone()
        })
    }

    /// Copy with a different name for the fundamental class.
    pub fn with_fundamental_name(&self, name: &str) -> ChowRing {
        let mut r = self.clone();
        r.index.remove(&r.basis[0].name);
        r.basis[0].name = name.to_string();
        r.index.insert(name.to_string(), 0);
        r
    }
}

fn validate_products(
    basis: &[BasisElement],
    dim: usize,
    table: Vec<Vec<Vec<Rational>>>,
) -> Result<Vec<Vec<Sparse>>, String> {
    let n = basis.len();
    if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
        return Err("product table has wrong shape".into());
    }
    for i in 0..n {
        for j in 0..n {
            let target = basis[i].codim + basis[j].codim;
            for (k, c) in table[i][j].iter().enumerate() {
                if !c.is_zero() && (target > dim || basis[k].codim != target) {
                    return Err(format!(
                        "grading violation: {}*{} has a {} term",
                        basis[i].name, basis[j].name, basis[k].name
                    ));
                }
            }
            if table[i][j] != table[j][i] {
                return Err(format!(
                    "non-commutative pair ({}, {})",
                    basis[i].name, basis[j].name
                ));
            }
        }
        let unit: Vec<Rational> = (0..n)
            .map(|k| if k == i { Rational::one() } else { Rational::zero() })
            .collect();
        if table[0][i] != unit {
            return Err(format!("[V] is not a unit on {}", basis[i].name));
        }
    }
    let sparse: Vec<Vec<Sparse>> = table
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mul_vec = |v: &Sparse, j: usize| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (a, ca) in v {
            for (b, cb) in &sparse[*a][j] {
                out[*b] += ca * cb;
            }
        }
        out
    };
    for i in 0..n {
        for j in i..n {
            let ij = &sparse[i][j];
            for k in 0..n {
                if basis[i].codim + basis[j].codim + basis[k].codim > dim {
                    continue;
                }
                let left = mul_vec(ij, k);
                let right = mul_vec(&sparse[j][k], i);
                if left != right {
                    return Err(format!(
                        "non-associative triple ({}, {}, {})",
                        basis[i].name, basis[j].name, basis[k].name
                    ));
                }
            }
        }
    }
    Ok(sparse)
}

impl fmt::Display for ChowRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {} (dim {})", self.label, self.dim)?;
        for k in 0..=self.dim {
            let names: Vec<&str> = self.codim_indices(k).map(|i| self.name(i)).collect();
            writeln!(f, "  codim {k}: {}", names.join(", "))?;
        }
        Ok(())
    }
}
