use super::{FieldCtx, FieldElem, FieldError, Matrix};

/// Injective ring homomorphism GF(p^a) -> GF(p^b), `a | b`.
///
/// The generator `x` of the small field is sent to the first root (by
/// canonical index) of the small field's modulus inside the large field.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    small: FieldCtx,
    large: FieldCtx,
    image: Vec<FieldElem>,
}

impl FieldEmbedding {
    pub fn new(small: &FieldCtx, large: &FieldCtx) -> Result<Self, FieldError> {
        let none = || FieldError::NoSubfieldEmbedding { small: small.order(), large: large.order() };
        if small.characteristic() != large.characteristic() || !large.degree().is_multiple_of(small.degree()) {
            return Err(none());
        }
        let modulus: Vec<FieldElem> = small.modulus().iter().map(|&c| large.constant(c as u64)).collect();
        let eval = |x: FieldElem| {
            modulus.iter().rev().fold(FieldElem::ZERO, |acc, &c| large.add(large.mul(acc, x), c))
        };
        let root = large.elements().find(|&x| eval(x).is_zero()).ok_or_else(none)?;

        let image = small
            .elements()
            .map(|a| {
                small
                    .coefficients(a)
                    .iter()
                    .rev()
                    .fold(FieldElem::ZERO, |acc, &c| large.add(large.mul(acc, root), large.constant(c as u64)))
            })
            .collect();
        Ok(FieldEmbedding { small: small.clone(), large: large.clone(), image })
    }

    pub fn source(&self) -> &FieldCtx {
        &self.small
    }

    pub fn target(&self) -> &FieldCtx {
        &self.large
    }

    /// Image of the small field's generator.
    pub fn generator_image(&self) -> FieldElem {
        let x = if self.small.degree() == 1 { FieldElem::ZERO } else { FieldElem(self.small.characteristic()) };
        self.apply(x)
    }

    pub fn apply(&self, a: FieldElem) -> FieldElem {
        self.image[a.index() as usize]
    }

    pub fn apply_vector(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        v.iter().map(|&a| self.apply(a)).collect()
    }

    pub fn apply_matrix(&self, m: &Matrix) -> Result<Matrix, FieldError> {
        if m.field() != &self.small {
            return Err(FieldError::FieldMismatch { left: m.field().name(), right: self.small.name() });
        }
        let rows = (0..m.rows()).map(|i| self.apply_vector(m.row(i))).collect();
        Matrix::from_rows(&self.large, rows, m.cols())
    }
}

/// Smallest extension of `field` (degree a multiple of its own) with at least
/// `min_order` elements, together with the embedding into it.
pub fn enlarge(field: &FieldCtx, min_order: u64) -> Result<FieldEmbedding, FieldError> {
    let p = field.characteristic();
    let mut l = field.degree();
    while (p as u64).checked_pow(l).is_none_or(|q| q < min_order) {
        l += field.degree();
        if (p as u64).checked_pow(l).is_none_or(|q| q > super::MAX_ORDER) {
            return Err(FieldError::TooLarge { p, l });
        }
    }
    FieldEmbedding::new(field, &FieldCtx::new(p, l)?)
}
