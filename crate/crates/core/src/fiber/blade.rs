use std::fmt;

/// Largest supported fiber dimension (fiber rank `2^12 = 4096`).
pub const MAX_DIM: usize = 12;
/// Smallest supported fiber dimension.
pub const MIN_DIM: usize = 2;

/// Basis blade `e_I`, stored as a bitmask with bit `k` standing for `e_{k+1}`.
///
/// The blade is always read with its indices in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Blade from zero-based frame indices. Repeats are not allowed.
    pub fn from_indices(indices: &[usize]) -> Blade {
        let mut mask = 0u32;
        for &i in indices {
            assert!(i < MAX_DIM, "frame index {i} out of range");
            assert!(mask & (1 << i) == 0, "repeated frame index {i}");
            mask |= 1 << i;
        }
        Blade(mask)
    }

    /// Single generator `e_{i+1}`.
    pub fn vector(i: usize) -> Blade {
        Blade(1 << i)
    }

    /// Top blade `e_{1..n}`.
    pub fn full(dim: usize) -> Blade {
        Blade(((1u64 << dim) - 1) as u32)
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Ordered complement `I'` inside `{1..n}`.
    pub fn complement(self, dim: usize) -> Blade {
        Blade(Blade::full(dim).0 & !self.0)
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    /// Zero-based indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    /// All `2^dim` blades in mask order.
    pub fn all(dim: usize) -> impl Iterator<Item = Blade> {
        (0..(1u32 << dim)).map(Blade)
    }

    /// All blades of one grade in mask order.
    pub fn of_grade(dim: usize, grade: usize) -> impl Iterator<Item = Blade> {
        Blade::all(dim).filter(move |b| b.grade() == grade)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        write!(f, "e")?;
        for i in self.indices() {
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// Number of transpositions needed to bring `e_a e_b` into ascending order,
/// taken mod 2. True means the reordering contributes a minus sign.
#[inline]
pub fn reorder_is_odd(a: Blade, b: Blade) -> bool {
    let mut a = a.0 >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b.0).count_ones();
        a >>= 1;
    }
    swaps % 2 == 1
}

/// Sign and result blade of `e_a · e_b` under `e_i e_i = -1`.
#[inline]
pub fn clifford_product(a: Blade, b: Blade) -> (bool, Blade) {
    let negative = reorder_is_odd(a, b) ^ ((a.0 & b.0).count_ones() % 2 == 1);
    (negative, Blade(a.0 ^ b.0))
}

/// Sign and blade of `e_a ∧ e_b`, or `None` when they share a generator.
#[inline]
pub fn wedge_product(a: Blade, b: Blade) -> Option<(bool, Blade)> {
    if a.0 & b.0 != 0 {
        None
    } else {
        Some((reorder_is_odd(a, b), Blade(a.0 | b.0)))
    }
}

/// Sign and blade of the interior product `ι_{e_i} e_I`.
#[inline]
pub fn interior_product(i: usize, b: Blade) -> Option<(bool, Blade)> {
    if !b.contains(i) {
        return None;
    }
    let below = (b.0 & ((1u32 << i) - 1)).count_ones();
    Some((below % 2 == 1, Blade(b.0 & !(1 << i))))
}

/// Reversion sign `(-1)^{k(k-1)/2}` on a grade-`k` blade.
#[inline]
pub fn reversion_is_negative(b: Blade) -> bool {
    let k = b.grade();
    (k * k.saturating_sub(1) / 2) % 2 == 1
}
