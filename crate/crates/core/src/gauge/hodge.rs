use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isocrystal::SlopeDatum;

/// Hodge numbers `h^{i,j}`, finitely supported. Zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HodgeTable {
    entries: BTreeMap<(i64, i64), u64>,
}

impl HodgeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = ((i64, i64), u64)>>(entries: I) -> Self {
        let mut t = Self::new();
        for ((i, j), h) in entries {
            t.add(i, j, h);
        }
        t
    }

    pub fn add(&mut self, i: i64, j: i64, h: u64) {
        if h > 0 {
            *self.entries.entry((i, j)).or_default() += h;
        }
    }

    pub fn get(&self, i: i64, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), u64> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn direct_sum(&self, other: &HodgeTable) -> HodgeTable {
        let mut t = self.clone();
        for (&(i, j), &h) in &other.entries {
            t.add(i, j, h);
        }
        t
    }

    /// Breuil–Kisin twist `{k}`: `(i, j) ↦ (i - k, j + k)`.
    pub fn twist(&self, k: i64) -> HodgeTable {
        Self::from_entries(self.entries.iter().map(|(&(i, j), &h)| ((i - k, j + k), h)))
    }

    /// Moves the table `d` cohomological degrees up: `(i, j) ↦ (i, j + d)`.
    pub fn shift(&self, d: i64) -> HodgeTable {
        Self::from_entries(self.entries.iter().map(|(&(i, j), &h)| ((i, j + d), h)))
    }

    /// `Σ_{i+j=d} h^{i,j}`.
    pub fn total_in_degree(&self, d: i64) -> u64 {
        self.entries
            .iter()
            .filter(|(&(i, j), _)| i + j == d)
            .map(|(_, &h)| h)
            .sum()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.entries.keys().map(|&(i, j)| i + j).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Range of the first index `i`, if nonempty.
    pub fn weight_range(&self) -> Option<(i64, i64)> {
        let min = self.entries.keys().map(|&(i, _)| i).min()?;
        let max = self.entries.keys().map(|&(i, _)| i).max()?;
        Some((min, max))
    }
}

impl fmt::Display for HodgeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(&(i, j), &h)| format!("h^{{{i},{j}}}={h}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `χ(M, r) = Σ_{i ≤ r} (-1)^{i+j} (r - i) h^{i,j}`.
pub fn weighted_hodge_euler(h: &HodgeTable, r: i64) -> i64 {
    h.entries
        .iter()
        .filter(|(&(i, _), _)| i <= r)
        .map(|(&(i, j), &n)| {
            let sign = if (i + j).rem_euclid(2) == 0 { 1 } else { -1 };
            sign * (r - i) * n as i64
        })
        .sum()
}

/// Hodge table of the Dieudonné module of a p-divisible group `G`:
/// `h^{0,0} = dim G^∨`, `h^{1,-1} = dim G`.
pub fn hodge_from_pdiv(dim_g: u64, dim_g_dual: u64) -> HodgeTable {
    HodgeTable::from_entries([((0, 0), dim_g_dual), ((1, -1), dim_g)])
}

/// `(dim G, height G)` from the slopes of `M(G)[1/p]`.
pub fn pdiv_invariants(slopes: &[SlopeDatum]) -> Result<(u64, u64)> {
    let mut dim = BigRational::zero();
    let mut height = 0u64;
    for d in slopes {
        if d.slope.is_negative() || d.slope > BigRational::from_integer(1.into()) {
            return Err(Error::NotRealizable(format!("slope {} outside [0, 1]", d.slope)));
        }
        if d.multiplicity == 0 {
            return Err(Error::NotRealizable("zero multiplicity".into()));
        }
        dim += &d.slope * BigRational::from_integer((d.multiplicity as u64).into());
        height += d.multiplicity as u64;
    }
    if !dim.is_integer() {
        return Err(Error::NotRealizable(format!("dimension {dim} is not an integer")));
    }
    Ok((dim.to_integer().to_u64().expect("nonnegative"), height))
}

/// The Hodge table forced by pure slope data in cohomological degree 0:
/// slope `λ` with multiplicity `h` sits in weights `⌊λ⌋` and `⌊λ⌋ + 1` as a
/// twisted p-divisible group of dimension `(λ - ⌊λ⌋) h`.
pub fn hodge_from_slopes(slopes: &[SlopeDatum]) -> Result<HodgeTable> {
    let mut t = HodgeTable::new();
    for d in slopes {
        let a = d.slope.floor().to_integer();
        let a_i64 = a.to_i64().ok_or_else(|| Error::NotRealizable("slope too large".into()))?;
        let frac = SlopeDatum::new(&d.slope - BigRational::from_integer(a), d.multiplicity);
        let (dim_g, height) = pdiv_invariants(std::slice::from_ref(&frac))?;
        t = t.direct_sum(&hodge_from_pdiv(dim_g, height - dim_g).twist(-a_i64));
    }
    Ok(t)
}

/// Checks that a multiplicity is compatible with the slope's denominator.
pub(crate) fn check_slope_multiplicity(d: &SlopeDatum) -> Result<()> {
    let den = d.slope.denom().to_u64().unwrap_or(u64::MAX);
    if (d.multiplicity as u64).is_multiple_of(den) {
        Ok(())
    } else {
        Err(Error::NotRealizable(format!(
            "slope {} needs a multiplicity divisible by {den}",
            d.slope
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::parse_rational;

    fn elliptic() -> HodgeTable {
        HodgeTable::from_entries([((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)])
    }

    #[test]
    fn elliptic_curve_weight_one() {
        assert_eq!(weighted_hodge_euler(&elliptic(), 1), 0);
    }

    #[test]
    fn pdiv_table_matches_closed_form() {
        for (g, gd) in [(1u64, 1u64), (0, 1), (1, 0), (2, 3)] {
            let t = hodge_from_pdiv(g, gd);
            for r in -4..=6i64 {
                let expected = if r <= 0 { 0 } else { r * gd as i64 + (r - 1) * g as i64 };
                assert_eq!(weighted_hodge_euler(&t, r), expected, "({g},{gd}) r={r}");
            }
        }
        assert_eq!(hodge_from_pdiv(0, 1), HodgeTable::from_entries([((0, 0), 1)]));
        assert_eq!(hodge_from_pdiv(1, 0), HodgeTable::from_entries([((1, -1), 1)]));
    }

    #[test]
    fn twist_and_shift_laws() {
        let t = elliptic().direct_sum(&hodge_from_pdiv(1, 2));
        for i in -2..=2 {
            for r in -3..=5 {
                assert_eq!(weighted_hodge_euler(&t.twist(i), r), weighted_hodge_euler(&t, r + i));
                assert_eq!(weighted_hodge_euler(&t.shift(1), r), -weighted_hodge_euler(&t, r));
            }
        }
    }

    #[test]
    fn pdiv_invariant_examples() {
        let q = |s: &str| parse_rational(s).unwrap();
        assert_eq!(pdiv_invariants(&[SlopeDatum::new(q("1/2"), 2)]), Ok((1, 2)));
        assert_eq!(pdiv_invariants(&[SlopeDatum::new(q("0"), 1)]), Ok((0, 1)));
        assert_eq!(pdiv_invariants(&[SlopeDatum::new(q("1"), 1)]), Ok((1, 1)));
        assert!(matches!(
            pdiv_invariants(&[SlopeDatum::new(q("1/2"), 1)]),
            Err(Error::NotRealizable(_))
        ));
        assert!(pdiv_invariants(&[SlopeDatum::new(q("3/2"), 2)]).is_err());
    }

    #[test]
    fn slope_table() {
        let q = |s: &str| parse_rational(s).unwrap();
        let t = hodge_from_slopes(&[SlopeDatum::new(q("0"), 1), SlopeDatum::new(q("1"), 1)]).unwrap();
        assert_eq!(t, HodgeTable::from_entries([((0, 0), 1), ((1, -1), 1)]));
        let t = hodge_from_slopes(&[SlopeDatum::new(q("5/3"), 3)]).unwrap();
        assert_eq!(t, HodgeTable::from_entries([((1, -1), 1), ((2, -2), 2)]));
    }
}
