//! The finite automorphism action on torsion line bundles over a
//! stack-theoretic elliptic tail, and the classification of nontrivial
//! stabilizers of faithful elements of exact order `l`.
//!
//! The torsion group is `Z/l ⊕ Z/r` with `r | l`: a bundle is a pair
//! `(k1, k2)` with `k1` mod `l` and `k2` mod `r`. The automorphism group is
//! `Z/2 ⊕ Z/r`, generated by the inversion `i: (k1, k2) ↦ (−k1, −k2)` and a
//! distinguished ghost `g: (k1, k2) ↦ (k1 + k2·(l/r), k2)` (the second
//! summand embeds into `Z/l` via multiplication by `l/r`). These two maps
//! commute, so `(a1, a2)` acts as `i^{a1} ∘ g^{a2}`:
//!
//! `(a1, a2)·(k1, k2) = ((−1)^{a1}(k1 + a2·k2·(l/r)), (−1)^{a1}·k2)`.
//!
//! The headline fact, reproduced here by brute force: a faithful bundle of
//! exact order `l` has a nontrivial stabilizer only in four cases —
//! `(l, r) = (1, 1)` (the trivial bundle, fixed by the inversion),
//! `(2, 1)` with `k1 = 1`, `(2, 2)` with `k2 = 1` (stabilizer `(1, 0)` in
//! all three), and `(4, 2)` with `k1` primitive and `k2 = 1` (stabilizer
//! `(1, 1)`).

use thiserror::Error;

/// Errors from tail-bundle construction and stabilizer queries.
#[derive(Debug, Error)]
pub enum TailError {
    /// The ramified torsion order must divide the full order.
    #[error("torsion shape invalid: r = {r} does not divide l = {l}")]
    TorsionDoesNotDivide {
        /// The ramified component order.
        r: u64,
        /// The full order.
        l: u64,
    },
    /// Orders must be positive.
    #[error("torsion orders must be positive (got l = {l}, r = {r})")]
    ZeroOrder {
        /// The full order.
        l: u64,
        /// The ramified component order.
        r: u64,
    },
    /// Two objects over different torsion shapes cannot be combined.
    #[error("shape mismatch: cannot combine objects over r = {left_r} and r = {right_r}")]
    ShapeMismatch {
        /// The first object's `r`.
        left_r: u64,
        /// The second object's `r`.
        right_r: u64,
    },
    /// Stabilizer classification requires a faithful bundle.
    #[error("bundle is not faithful: gcd(k2 = {k2}, r = {r}) ≠ 1")]
    Unfaithful {
        /// The ramified exponent.
        k2: u64,
        /// The ramified order.
        r: u64,
    },
    /// Stabilizer classification requires exact order `l`.
    #[error("bundle has order {found}, not the full order l = {expected}")]
    WrongOrder {
        /// The actual element order.
        found: u64,
        /// The required order `l`.
        expected: u64,
    },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A torsion line bundle on an elliptic tail: an element `(k1, k2)` of
/// `Z/l ⊕ Z/r` with `r | l`, stored normalized (`k1 ∈ [0, l)`,
/// `k2 ∈ [0, r)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TailLineBundle {
    /// The full torsion order `l`.
    pub l: u64,
    /// The ramified torsion order `r`, a divisor of `l`.
    pub r: u64,
    /// Exponent of the étale generator, mod `l`.
    pub k1: u64,
    /// Exponent of the ramified generator, mod `r`.
    pub k2: u64,
}

impl TailLineBundle {
    /// Builds a bundle, normalizing the exponents into their ranges.
    pub fn new(l: u64, r: u64, k1: i64, k2: i64) -> Result<Self, TailError> {
        if l == 0 || r == 0 {
            return Err(TailError::ZeroOrder { l, r });
        }
        if !l.is_multiple_of(r) {
            return Err(TailError::TorsionDoesNotDivide { r, l });
        }
        Ok(TailLineBundle {
            l,
            r,
            k1: k1.rem_euclid(l as i64) as u64,
            k2: k2.rem_euclid(r as i64) as u64,
        })
    }

    /// Whether the bundle is faithful: `gcd(k2, r) = 1`.
    pub fn is_faithful(&self) -> bool {
        gcd(self.k2, self.r) == 1
    }

    /// The exact order of `(k1, k2)` in `Z/l ⊕ Z/r`, found by direct power
    /// testing (the mixed embedding makes closed-form order formulas easy to
    /// get wrong, so we just iterate).
    pub fn order(&self) -> u64 {
        let mut k1 = 0u64;
        let mut k2 = 0u64;
        for t in 1..=(self.l * self.r.max(1)) {
            k1 = (k1 + self.k1) % self.l;
            k2 = (k2 + self.k2) % self.r;
            if k1 == 0 && k2 == 0 {
                return t;
            }
        }
        unreachable!("the order divides l·r")
    }
}

/// An automorphism `(a1, a2)` of the tail: `a1` mod 2 is the inversion
/// exponent, `a2` mod `r` the ghost exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TailAutomorphism {
    /// The `r` of the torsion shape acted on.
    pub r: u64,
    /// Inversion exponent, mod 2.
    pub a1: u64,
    /// Ghost exponent, mod `r`.
    pub a2: u64,
}

impl TailAutomorphism {
    /// Builds an automorphism over torsion shape `r`, normalizing exponents.
    pub fn new(r: u64, a1: i64, a2: i64) -> Result<Self, TailError> {
        if r == 0 {
            return Err(TailError::ZeroOrder { l: 0, r });
        }
        Ok(TailAutomorphism {
            r,
            a1: a1.rem_euclid(2) as u64,
            a2: a2.rem_euclid(r as i64) as u64,
        })
    }

    /// The identity over shape `r`.
    pub fn identity(r: u64) -> Self {
        TailAutomorphism { r, a1: 0, a2: 0 }
    }

    /// Whether this is the identity.
    pub fn is_identity(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    /// Group composition in `Z/2 ⊕ Z/r` (coordinatewise addition).
    pub fn compose(&self, other: &TailAutomorphism) -> Result<TailAutomorphism, TailError> {
        if self.r != other.r {
            return Err(TailError::ShapeMismatch {
                left_r: self.r,
                right_r: other.r,
            });
        }
        Ok(TailAutomorphism {
            r: self.r,
            a1: (self.a1 + other.a1) % 2,
            a2: (self.a2 + other.a2) % self.r,
        })
    }

    /// All `2r` automorphisms over shape `r`, in lexicographic `(a1, a2)`
    /// order.
    pub fn all(r: u64) -> Vec<TailAutomorphism> {
        (0..2u64)
            .flat_map(|a1| (0..r).map(move |a2| TailAutomorphism { r, a1, a2 }))
            .collect()
    }
}

/// Applies `(a1, a2)` to `(k1, k2)`:
/// `((−1)^{a1}(k1 + a2·k2·(l/r)), (−1)^{a1}·k2)`, the action of
/// `inversion^{a1} ∘ ghost^{a2}`.
pub fn tail_act(
    g: &TailAutomorphism,
    bundle: &TailLineBundle,
) -> Result<TailLineBundle, TailError> {
    if g.r != bundle.r {
        return Err(TailError::ShapeMismatch {
            left_r: g.r,
            right_r: bundle.r,
        });
    }
    let l = bundle.l;
    let r = bundle.r;
    let embedded = (g.a2 as u128 * bundle.k2 as u128 % r as u128) as u64 * (l / r) % l;
    let mut k1 = (bundle.k1 + embedded) % l;
    let mut k2 = bundle.k2;
    if g.a1 == 1 {
        k1 = (l - k1) % l;
        k2 = (r - k2) % r;
    }
    Ok(TailLineBundle { l, r, k1, k2 })
}

/// The orbit of a bundle under all `2r` automorphisms, sorted and
/// deduplicated.
pub fn tail_orbit(bundle: &TailLineBundle) -> Vec<TailLineBundle> {
    let mut orbit: Vec<TailLineBundle> = TailAutomorphism::all(bundle.r)
        .iter()
        .map(|g| tail_act(g, bundle).expect("shapes match by construction"))
        .collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// All nontrivial automorphisms fixing a faithful bundle of exact order `l`,
/// in lexicographic `(a1, a2)` order.
///
/// By the classification this is nonempty only for
/// `(l, r) ∈ {(1,1), (2,1), (2,2), (4,2)}` with the stated bundles; the
/// stabilizing element is `(1, 0)` in the first three cases and `(1, 1)` in
/// the last. This function derives that by direct search rather than by
/// table lookup.
pub fn tail_stabilizer(bundle: &TailLineBundle) -> Result<Vec<TailAutomorphism>, TailError> {
    if !bundle.is_faithful() {
        return Err(TailError::Unfaithful {
            k2: bundle.k2,
            r: bundle.r,
        });
    }
    let order = bundle.order();
    if order != bundle.l {
        return Err(TailError::WrongOrder {
            found: order,
            expected: bundle.l,
        });
    }
    Ok(TailAutomorphism::all(bundle.r)
        .into_iter()
        .filter(|g| !g.is_identity())
        .filter(|g| tail_act(g, bundle).expect("shapes match") == *bundle)
        .collect())
}
