//! Dense bit-vector linear algebra over GF(2), for the rank oracle.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Index of the highest set bit.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Rank of the span of `vectors`.
pub(crate) fn rank(vectors: &[BitVec]) -> usize {
    let mut pivots: Vec<(usize, BitVec)> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        while let Some(lead) = v.leading() {
            match pivots.iter().find(|(p, _)| *p == lead) {
                Some((_, row)) => v.xor_assign(row),
                None => {
                    pivots.push((lead, v));
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Basis of `{x : sum_j x_j * columns[j] = 0}`, as vectors over the column
/// index space.
pub(crate) fn kernel(columns: &[BitVec]) -> Vec<BitVec> {
    let n = columns.len();
    // Track the combination of original columns that produced each reduced one.
    let mut reduced: Vec<(usize, BitVec, BitVec)> = Vec::new();
    let mut basis = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = BitVec::zeros(n);
        combo.set(j);
        loop {
            match v.leading() {
                None => {
                    basis.push(combo);
                    break;
                }
                Some(lead) => match reduced.iter().find(|(p, _, _)| *p == lead) {
                    Some((_, rv, rc)) => {
                        v.xor_assign(rv);
                        combo.xor_assign(rc);
                    }
                    None => {
                        reduced.push((lead, v, combo));
                        break;
                    }
                },
            }
        }
    }
    basis
}
