use serde::{Deserialize, Serialize};

/// Simplex counts `(v_0, ..., v_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    /// `S * f`, padding `f` with zeros up to the size of `S`.
    pub fn apply(&self, s: &[Vec<i64>]) -> FVector {
        let out = s
            .iter()
            .map(|row| {
                row.iter()
                    .zip(self.0.iter().chain(std::iter::repeat(&0)))
                    .map(|(a, &b)| a * b as i64)
                    .sum::<i64>() as u64
            })
            .collect::<Vec<_>>();
        // drop trailing zero dimensions
        let len = out.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
        FVector(out[..len].to_vec())
    }
}

/// Ordered intersecting pair counts `v_kl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FMatrix(pub Vec<Vec<u64>>);

impl FMatrix {
    /// `sum_kl (-1)^(k+l) v_kl`, the Wu characteristic.
    pub fn alternating_sum(&self) -> i64 {
        let mut total = 0i64;
        for (k, row) in self.0.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                total += if (k + l) % 2 == 0 { v as i64 } else { -(v as i64) };
            }
        }
        total
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }
}

/// Stirling numbers of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// The `(d+1) x (d+1)` matrix `S_ij = i! S(j, i)` (indices from 1) that maps
/// the f-vector of a complex to the f-vector of its Barycentric refinement.
pub fn barycentric_operator(d: usize) -> Vec<Vec<i64>> {
    let fact = |n: usize| (1..=n as i64).product::<i64>();
    (1..=d + 1)
        .map(|i| {
            (1..=d + 1)
                .map(|j| fact(i) * stirling2(j, i) as i64)
                .collect()
        })
        .collect()
}
