//! Closed-form ground-state quantities, evaluated in exact integer arithmetic.

use crate::error::{Error, Result};

/// Largest `s` with `s * s <= x`.
pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    // float seed, then bracket exactly
    let mut s = (x as f64).sqrt() as u128;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// Smallest `s` with `s * s >= x`.
pub fn isqrt_ceil(x: u128) -> u128 {
    let s = isqrt(x);
    if s * s == x { s } else { s + 1 }
}

fn discriminant(n: u64) -> u128 {
    12 * n as u128 - 3
}

/// Maximal number of unit-distance bonds among `n` atoms, `floor(3n - sqrt(12n - 3))`.
pub fn max_bond_formula(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange("bond formula needs N >= 1".into()));
    }
    // floor(3n - r) = 3n - ceil(r)
    Ok((3 * n as u128 - isqrt_ceil(discriminant(n))) as u64)
}

/// Number of boundary atoms of an `n`-atom ground state, `-floor(3 - sqrt(12n - 3))`.
pub fn boundary_size_formula(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::OutOfRange("boundary formula needs N >= 3".into()));
    }
    // -floor(3 - r) = ceil(r) - 3
    Ok((isqrt_ceil(discriminant(n)) - 3) as u64)
}

/// Ground-state energy `-6n + 2 ceil(sqrt(12n - 3))`; zero atoms have zero energy.
pub fn ground_state_energy(n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    -6 * n as i64 + 2 * isqrt_ceil(discriminant(n)) as i64
}

/// Number of sites of the lattice hexagon of radius `k`.
pub fn hexagonal_number(k: u64) -> u64 {
    3 * k * (k + 1) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_brackets() {
        for x in 0u128..5000 {
            let s = isqrt(x);
            assert!(s * s <= x && (s + 1) * (s + 1) > x);
        }
        let big = (1u128 << 100) - 1;
        let s = isqrt(big);
        assert!(s * s <= big && (s + 1) * (s + 1) > big);
        assert_eq!(isqrt(729), 27);
        assert_eq!(isqrt_ceil(741), 28);
    }

    #[test]
    fn bond_formula_values() {
        assert_eq!(max_bond_formula(61).unwrap(), 156);
        assert_eq!(max_bond_formula(1).unwrap(), 0);
        assert_eq!(max_bond_formula(12).unwrap(), 24);
        assert_eq!(max_bond_formula(7).unwrap(), 12);
        assert_eq!(max_bond_formula(62).unwrap(), 158);
        assert_eq!(max_bond_formula(218).unwrap(), 602);
        assert_eq!(max_bond_formula(20).unwrap(), 44);
        assert!(max_bond_formula(0).is_err());
    }

    #[test]
    fn boundary_formula_values() {
        assert_eq!(boundary_size_formula(61).unwrap(), 24);
        assert_eq!(boundary_size_formula(7).unwrap(), 6);
        assert_eq!(boundary_size_formula(3).unwrap(), 3);
        assert!(boundary_size_formula(2).is_err());
    }

    #[test]
    fn energy_matches_bond_formula() {
        for n in 1..20_000u64 {
            assert_eq!(ground_state_energy(n), -2 * max_bond_formula(n).unwrap() as i64);
        }
        assert_eq!(ground_state_energy(7), -24);
        assert_eq!(ground_state_energy(61), -312);
        assert_eq!(ground_state_energy(62), -316);
        assert_eq!(ground_state_energy(218), -1204);
    }

    #[test]
    fn exact_near_perfect_squares_at_large_n() {
        // 12n - 3 = r^2 for odd r divisible by 3: n = (r^2 + 3) / 12
        for r in (3u64..2_000_001).step_by(6).skip(1000).take(50) {
            if (r * r + 3) % 12 != 0 {
                continue;
            }
            let n = (r * r + 3) / 12;
            assert_eq!(max_bond_formula(n).unwrap(), 3 * n - r);
            assert_eq!(max_bond_formula(n + 1).unwrap(), 3 * (n + 1) - (r + 1));
        }
        let n = 1_000_000_000_000u64;
        let r = isqrt_ceil(12 * n as u128 - 3) as u64;
        assert_eq!(max_bond_formula(n).unwrap(), 3 * n - r);
    }
}
