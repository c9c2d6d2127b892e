//! Integer partitions, set-partition counts, generalized factorials and
//! C-numbers.
//!
//! Partitions of `n` are listed in increasing number of parts; partitions with
//! the same number of parts are listed in reverse lexicographic order of their
//! (nonincreasing) parts. For `n = 4` that is `(4), (3,1), (2,2), (2,1,1),
//! (1,1,1,1)`. Indices into a [`PartitionTable`] are stable under this order.

use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Largest dimension supported. All set-partition counts up to this size fit
/// in a `u64` (Bell(20) is about 5.17e13).
pub const MAX_DIMENSION: usize = 20;

/// A partition of `n` into nonincreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPartition {
    parts: Vec<u32>,
    /// Multiplicity of each distinct part value, largest value first.
    multiplicities: Vec<u32>,
}

impl IntegerPartition {
    /// Builds a partition from parts in any order; they are sorted into
    /// nonincreasing order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(domain("partition parts must be nonempty and positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let mut multiplicities = Vec::new();
        let mut i = 0;
        while i < parts.len() {
            let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
            multiplicities.push(j as u32);
            i += j;
        }
        Ok(Self {
            parts,
            multiplicities,
        })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts (`k`).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The integer being partitioned.
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionEntry {
    pub partition: IntegerPartition,
    /// Number of set partitions of `{1..n}` whose block sizes are `partition`.
    pub ps_count: u64,
}

/// Every integer partition of `n`, in canonical order, with set-partition counts.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionTable {
    n: usize,
    entries: Vec<PartitionEntry>,
}

impl PartitionTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[PartitionEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PartitionEntry> {
        self.entries.iter()
    }

    /// Entries with exactly `k` parts.
    pub fn with_parts(&self, k: usize) -> impl Iterator<Item = &PartitionEntry> {
        self.entries.iter().filter(move |e| e.partition.len() == k)
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIMENSION {
        return Err(domain(format!(
            "dimension {n} out of range: must satisfy 1 <= n <= {MAX_DIMENSION}"
        )));
    }
    Ok(())
}

/// Builds the partition table of `n`, `1 <= n <= 20`.
pub fn enumerate_partitions(n: usize) -> Result<PartitionTable> {
    check_dimension(n)?;
    let mut all = Vec::new();
    let mut current = Vec::new();
    collect_partitions(n as u32, n as u32, &mut current, &mut all);
    // Stable order: part count ascending, then parts reverse-lexicographic.
    all.sort_by(|a: &Vec<u32>, b: &Vec<u32>| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    let entries = all
        .into_iter()
        .map(|parts| {
            let partition = IntegerPartition::new(parts)?;
            let ps_count = set_partition_count(&partition)?;
            Ok(PartitionEntry { partition, ps_count })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionTable { n, entries })
}

fn collect_partitions(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        collect_partitions(remaining - part, part, current, out);
        current.pop();
    }
}

/// Cached partition table for `n`; tables are built once per process.
pub fn partition_table(n: usize) -> Result<&'static PartitionTable> {
    static TABLES: OnceLock<Vec<PartitionTable>> = OnceLock::new();
    check_dimension(n)?;
    let tables = TABLES.get_or_init(|| {
        (1..=MAX_DIMENSION)
            .map(|m| enumerate_partitions(m).expect("dimension within cap"))
            .collect()
    });
    Ok(&tables[n - 1])
}

fn factorial_u128(n: u32) -> u128 {
    (1..=u128::from(n)).product()
}

/// `n! / (n_1! ... n_k! m_1! ... m_d!)`: the number of set partitions of
/// `{1..n}` with block sizes given by `p`.
pub fn set_partition_count(p: &IntegerPartition) -> Result<u64> {
    let n = p.total();
    if n as usize > MAX_DIMENSION {
        return Err(domain(format!(
            "partition of {n} exceeds the supported maximum {MAX_DIMENSION}"
        )));
    }
    let numerator = factorial_u128(n);
    let denominator = p
        .parts
        .iter()
        .chain(p.multiplicities.iter())
        .map(|&v| factorial_u128(v))
        .try_fold(1u128, |acc, f| acc.checked_mul(f))
        .ok_or_else(|| domain("set partition count overflow"))?;
    debug_assert_eq!(numerator % denominator, 0);
    u64::try_from(numerator / denominator).map_err(|_| domain("set partition count overflow"))
}

/// `x (x-1) ... (x-k+1)`; 1 for `k = 0`.
pub fn falling_factorial(x: f64, k: u32) -> f64 {
    (0..k).map(|j| x - f64::from(j)).product()
}

/// `c (c+1) ... (c+k-1)`; 1 for `k = 0`.
pub fn rising_factorial(c: f64, k: u32) -> f64 {
    (0..k).map(|j| c + f64::from(j)).product()
}

/// Charalambides' C-number `C(n, k, alpha)`: the sum over partitions of `n`
/// with exactly `k` parts of `Ps * prod falling(alpha, n_j)`.
pub fn c_number(n: usize, k: usize, alpha: f64) -> Result<f64> {
    let table = partition_table(n)?;
    if k == 0 || k > n {
        return Err(domain(format!("C-number index k={k} must satisfy 1 <= k <= {n}")));
    }
    Ok(c_number_in(table, k, alpha))
}

pub(crate) fn c_number_in(table: &PartitionTable, k: usize, alpha: f64) -> f64 {
    table
        .with_parts(k)
        .map(|e| {
            e.ps_count as f64
                * e.partition
                    .parts()
                    .iter()
                    .map(|&nj| falling_factorial(alpha, nj))
                    .product::<f64>()
        })
        .sum()
}

/// All C-numbers `C(n, 1..=n, alpha)`, index `k - 1`.
pub fn c_numbers(n: usize, alpha: f64) -> Result<Vec<f64>> {
    let table = partition_table(n)?;
    Ok((1..=n).map(|k| c_number_in(table, k, alpha)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts_of(t: &PartitionTable) -> Vec<Vec<u32>> {
        t.iter().map(|e| e.partition.parts().to_vec()).collect()
    }

    #[test]
    fn n3_table() {
        let t = enumerate_partitions(3).unwrap();
        assert_eq!(parts_of(&t), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        let ps: Vec<u64> = t.iter().map(|e| e.ps_count).collect();
        assert_eq!(ps, vec![1, 3, 1]);
    }

    #[test]
    fn n4_table_order_and_counts() {
        let t = enumerate_partitions(4).unwrap();
        assert_eq!(
            parts_of(&t),
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
        let ps: Vec<u64> = t.iter().map(|e| e.ps_count).collect();
        assert_eq!(ps, vec![1, 4, 3, 6, 1]);
        assert_eq!(ps.iter().sum::<u64>(), 15);
    }

    #[test]
    fn n1_table() {
        let t = enumerate_partitions(1).unwrap();
        assert_eq!(parts_of(&t), vec![vec![1]]);
        assert_eq!(t.entries()[0].ps_count, 1);
    }

    #[test]
    fn reverse_lexicographic_within_equal_part_count() {
        let t = enumerate_partitions(6).unwrap();
        let three: Vec<Vec<u32>> = t.with_parts(3).map(|e| e.partition.parts().to_vec()).collect();
        assert_eq!(three, vec![vec![4, 1, 1], vec![3, 2, 1], vec![2, 2, 2]]);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(enumerate_partitions(0), Err(crate::Error::Domain(_))));
        let err = enumerate_partitions(21).unwrap_err().to_string();
        assert!(err.contains("20"), "{err}");
        assert_eq!(enumerate_partitions(20).unwrap().len(), 627);
    }

    #[test]
    fn ps_count_special_cases() {
        for n in 1..=20u32 {
            let one_block = IntegerPartition::new(vec![n]).unwrap();
            let singletons = IntegerPartition::new(vec![1; n as usize]).unwrap();
            assert_eq!(set_partition_count(&one_block).unwrap(), 1);
            assert_eq!(set_partition_count(&singletons).unwrap(), 1);
        }
        let p = IntegerPartition::new(vec![1, 2]).unwrap();
        assert_eq!(p.parts(), &[2, 1]);
        assert_eq!(set_partition_count(&p).unwrap(), 3);
    }

    #[test]
    fn multiplicities_sum_to_part_count() {
        for e in enumerate_partitions(9).unwrap().iter() {
            let p = &e.partition;
            assert_eq!(p.multiplicities().iter().sum::<u32>() as usize, p.len());
            assert_eq!(p.total(), 9);
            assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(falling_factorial(1.0, 2), 0.0);
        assert_eq!(falling_factorial(0.5, 2), -0.25);
        assert_eq!(falling_factorial(3.7, 0), 1.0);
        assert_eq!(rising_factorial(3.7, 0), 1.0);
        assert_eq!(rising_factorial(1.0, 3), 6.0);
    }

    #[test]
    fn falling_factorial_zero_iff_small_integer() {
        for m in 0..8u32 {
            for a in 0..10u32 {
                let v = falling_factorial(f64::from(a), m);
                assert_eq!(v == 0.0, a < m, "a={a} m={m}");
            }
            assert_ne!(falling_factorial(0.5, m), 0.0);
        }
    }

    #[test]
    fn c_number_examples() {
        assert_eq!(c_number(2, 1, 0.5).unwrap(), -0.25);
        for n in 1..=8 {
            let a: f64 = 0.37;
            let v = c_number(n, n, a).unwrap();
            assert!((v - a.powi(n as i32)).abs() <= 1e-15 * a.powi(n as i32));
        }
        assert!(c_number(3, 0, 0.5).is_err());
        assert!(c_number(3, 4, 0.5).is_err());
    }

    #[test]
    fn cached_table_matches_fresh() {
        assert_eq!(partition_table(7).unwrap(), &enumerate_partitions(7).unwrap());
    }
}
