use std::ops::{ControlFlow, Range};

use crate::gf2::BitVec;
use crate::stabilizer::{Pauli, PauliError, QuantumParityMatrix};

/// Syndromes of every single-qubit Pauli, for XOR-accumulated enumeration.
#[derive(Clone, Debug)]
pub struct SingleSyndromes {
    n: usize,
    m: usize,
    // indexed [qubit][Pauli::ALL position]
    cols: Vec<[BitVec; 3]>,
}

impl SingleSyndromes {
    pub fn new(q: &QuantumParityMatrix) -> Self {
        let n = q.n();
        let cols = (0..n)
            .map(|qubit| {
                Pauli::ALL.map(|p| q.syndrome(&PauliError::single(n, qubit, p)).expect("sized to code"))
            })
            .collect();
        SingleSyndromes { n, m: q.m(), cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, qubit: usize, p: Pauli) -> &BitVec {
        let slot = Pauli::ALL.iter().position(|&x| x == p).expect("listed");
        &self.cols[qubit][slot]
    }

    /// Syndrome of an arbitrary error, by XOR of single-qubit syndromes.
    pub fn syndrome_of(&self, e: &PauliError) -> BitVec {
        let mut s = BitVec::zeros(self.m);
        for qubit in 0..self.n {
            if let Some(p) = e.at(qubit) {
                s.xor_assign(self.get(qubit, p));
            }
        }
        s
    }
}

/// Visits every Pauli error of exactly `weight` whose lowest qubit lies in
/// `first`, in lexicographic order of qubit tuples and then X < Y < Z per
/// position. The callback sees the support and the syndrome.
pub fn for_each_error<B>(
    singles: &SingleSyndromes,
    weight: usize,
    first: Range<usize>,
    visit: &mut impl FnMut(&[(usize, Pauli)], &BitVec) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let mut support = Vec::with_capacity(weight);
    let mut acc = BitVec::zeros(singles.m);
    if weight == 0 {
        return visit(&support, &acc);
    }
    for q in first {
        if q + weight > singles.n {
            break;
        }
        for p in Pauli::ALL {
            acc.xor_assign(singles.get(q, p));
            support.push((q, p));
            recurse(singles, weight - 1, q + 1, &mut support, &mut acc, visit)?;
            support.pop();
            acc.xor_assign(singles.get(q, p));
        }
    }
    ControlFlow::Continue(())
}

fn recurse<B>(
    singles: &SingleSyndromes,
    remaining: usize,
    start: usize,
    support: &mut Vec<(usize, Pauli)>,
    acc: &mut BitVec,
    visit: &mut impl FnMut(&[(usize, Pauli)], &BitVec) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if remaining == 0 {
        return visit(support, acc);
    }
    for q in start..=singles.n - remaining {
        for p in Pauli::ALL {
            acc.xor_assign(singles.get(q, p));
            support.push((q, p));
            let flow = recurse(singles, remaining - 1, q + 1, support, acc, visit);
            support.pop();
            acc.xor_assign(singles.get(q, p));
            flow?;
        }
    }
    ControlFlow::Continue(())
}

pub(crate) fn to_error(n: usize, support: &[(usize, Pauli)]) -> PauliError {
    let mut e = PauliError::identity(n);
    for &(q, p) in support {
        e.apply(q, p);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::stabilizer::CpcAdjacency;

    #[test]
    fn counts_match_binomial() {
        let q = CpcAdjacency::new(BitMatrix::zeros(3, 2), BitMatrix::zeros(3, 2), BitMatrix::zeros(2, 2))
            .unwrap()
            .quantum_parity_matrix()
            .unwrap();
        let singles = SingleSyndromes::new(&q);
        for (w, expected) in [(0, 1), (1, 15), (2, 90), (3, 270)] {
            let mut count = 0;
            let _ = for_each_error::<()>(&singles, w, 0..5, &mut |support, s| {
                assert_eq!(support.len(), w);
                assert_eq!(*s, q.syndrome(&to_error(5, support)).unwrap());
                count += 1;
                ControlFlow::Continue(())
            });
            assert_eq!(count, expected, "weight {w}");
        }
    }
}
