use num_bigint::BigInt;

use crate::algebra::SparseIntMatrix;
use crate::simplicial::ZChainComplex;

use super::HomologyError;

/// A degree-preserving map of chain complexes, stored as one matrix per
/// degree of the source.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ZChainComplex,
    target: ZChainComplex,
    maps: Vec<SparseIntMatrix>,
}

impl ChainMap {
    /// `maps[i]` acts on degree `source.start() + i`. Checks shapes and
    /// `d f = f d` in every degree.
    pub fn new(source: ZChainComplex, target: ZChainComplex, maps: Vec<SparseIntMatrix>) -> Result<Self, HomologyError> {
        if maps.len() != source.ranks().len() {
            return Err(HomologyError::ChainMap(format!("{} maps for {} degrees", maps.len(), source.ranks().len())));
        }
        let f = ChainMap { source, target, maps };
        for k in f.source.start()..=f.source.top() {
            let m = f.at(k);
            if m.rows() != f.target.rank(k) || m.cols() != f.source.rank(k) {
                return Err(HomologyError::ChainMap(format!("map in degree {k} has the wrong shape")));
            }
            let left = f.target.boundary(k).mul(&m)?;
            let right = f.at(k - 1).mul(&f.source.boundary(k))?;
            if left != right {
                return Err(HomologyError::ChainMap(format!("fails to commute with the boundary in degree {k}")));
            }
        }
        Ok(f)
    }

    pub fn source(&self) -> &ZChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ZChainComplex {
        &self.target
    }

    /// The component in degree `k`, zero outside the source range.
    pub fn at(&self, k: i64) -> SparseIntMatrix {
        match usize::try_from(k - self.source.start()).ok().and_then(|i| self.maps.get(i)) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::zeros(self.target.rank(k), self.source.rank(k)),
        }
    }

    /// `Cone_k = C'_{k-1} ⊕ C_k` with `d(a, b) = (-d'a, f a + d b)`.
    pub fn cone(&self) -> ZChainComplex {
        mapping_cone(self)
    }
}

pub fn mapping_cone(f: &ChainMap) -> ZChainComplex {
    let (s, t) = (f.source(), f.target());
    let lo = (s.start() + 1).min(t.start());
    let hi = (s.top() + 1).max(t.top());
    let rank = |k: i64| s.rank(k - 1) + t.rank(k);
    let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
    let minus = BigInt::from(-1);
    let diffs = (lo + 1..=hi)
        .map(|k| {
            let a = s.boundary(k - 1).scale(&minus);
            let b = SparseIntMatrix::zeros(s.rank(k - 2), t.rank(k));
            SparseIntMatrix::block(&a, &b, &f.at(k - 1), &t.boundary(k)).expect("block shapes agree")
        })
        .collect();
    ZChainComplex::new_unchecked(lo, ranks, diffs).expect("shapes agree")
}
