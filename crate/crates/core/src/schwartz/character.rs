use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use super::SchwartzError;
use crate::padic::{CycloElement, CyclotomicField};
use crate::rational::{frac_part, p_pow, vp, Q};
use crate::scalar::ResidueInt;

/// Default bound on `|m|` and `|n|` for computed functions.
pub const DEFAULT_WINDOW: i64 = 12;

/// `x ↦ ψ(c·x)` where `ψ(j/p^l mod Z_p) = ζ^{j·p^{N-l}}`.
///
/// Also carries the window cap that operations producing new functions
/// respect.
#[derive(Clone)]
pub struct AdditiveCharacter<I: ResidueInt> {
    field: Arc<CyclotomicField<I>>,
    scale: Q,
    window: i64,
    powers: Vec<CycloElement<I>>,
}

impl<I: ResidueInt> AdditiveCharacter<I> {
    /// The standard character, kernel exactly `Z_p`.
    pub fn standard(field: &Arc<CyclotomicField<I>>) -> Self {
        Self::scaled(field, Q::from_integer(1.into())).expect("nonzero scale")
    }

    pub fn scaled(field: &Arc<CyclotomicField<I>>, scale: Q) -> Result<Self, SchwartzError> {
        if scale.is_zero() {
            return Err(SchwartzError::Unsupported("character scale must be nonzero".into()));
        }
        let order = field.root_order() as usize;
        let mut powers = Vec::with_capacity(order);
        let mut cur = CycloElement::one(field);
        for _ in 0..order {
            let next = cur.mul_zeta();
            powers.push(cur);
            cur = next;
        }
        Ok(Self {
            field: field.clone(),
            scale,
            window: DEFAULT_WINDOW,
            powers,
        })
    }

    pub fn with_window(mut self, window: i64) -> Self {
        self.window = window;
        self
    }

    pub fn field(&self) -> &Arc<CyclotomicField<I>> {
        &self.field
    }

    pub fn scale(&self) -> &Q {
        &self.scale
    }

    /// `v_p` of the scale.
    pub fn scale_valuation(&self) -> i64 {
        vp(&self.scale, self.field.p()).expect("nonzero scale")
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Smallest `l` with `ζ_{p^l}` enough to evaluate `ψ(x)`.
    pub fn conductor(&self, x: &Q) -> u32 {
        frac_part(&(&self.scale * x), self.field.p()).0
    }

    pub fn eval(&self, x: &Q) -> Result<CycloElement<I>, SchwartzError> {
        let p = self.field.p();
        let n = self.field.level();
        let (l, j) = frac_part(&(&self.scale * x), p);
        if l > n {
            return Err(SchwartzError::InsufficientField {
                required: l,
                available: n,
            });
        }
        let idx = j * p_pow(p, n - l);
        Ok(self.powers[idx.to_usize().expect("index below p^N")].clone())
    }
}
