//! Agency frames: paired neighbourhood functions for "brings about" and
//! "is capable of".

use crate::bitset::WorldSet;
use std::collections::BTreeSet;

/// A frame with, per agent and world, a family `nb` for bringing about and
/// a family `nc` for capability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgencyFrame {
    pub n_worlds: usize,
    /// `nb[i - 1][w]`.
    pub nb: Vec<Vec<BTreeSet<WorldSet>>>,
    /// `nc[i - 1][w]`.
    pub nc: Vec<Vec<BTreeSet<WorldSet>>>,
}

/// Whether the frame satisfies the agency conditions: the set of all worlds
/// and the empty set are never capabilities, bringing about is closed under
/// intersection and factive, and whatever is brought about is a capability.
pub fn validate_agency_frame(f: &AgencyFrame) -> bool {
    let all = WorldSet::full(f.n_worlds);
    let empty = WorldSet::new();
    f.nb.len() == f.nc.len()
        && f.nb.iter().zip(&f.nc).all(|(nb, nc)| {
            (0..f.n_worlds).all(|w| {
                let (b, c) = (&nb[w], &nc[w]);
                !c.contains(&all)
                    && !c.contains(&empty)
                    && b.iter().all(|x| b.iter().all(|y| b.contains(&x.intersection(y))))
                    && b.iter().all(|x| x.contains(w))
                    && b.is_subset(c)
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::Letter;
    use crate::semantics::conditions::family_condition;
    use proptest::prelude::*;

    fn fam(masks: &[u64]) -> BTreeSet<WorldSet> {
        masks.iter().map(|&m| WorldSet::from_mask(m)).collect()
    }

    #[test]
    fn examples() {
        let empty = AgencyFrame {
            n_worlds: 2,
            nb: vec![vec![fam(&[]), fam(&[])]],
            nc: vec![vec![fam(&[]), fam(&[])]],
        };
        assert!(validate_agency_frame(&empty));
        let unit = AgencyFrame {
            nc: vec![vec![fam(&[0b11]), fam(&[])]],
            ..empty.clone()
        };
        assert!(!validate_agency_frame(&unit));
        let good = AgencyFrame {
            n_worlds: 2,
            nb: vec![vec![fam(&[0b01]), fam(&[])]],
            nc: vec![vec![fam(&[0b01, 0b10]), fam(&[0b01])]],
        };
        assert!(validate_agency_frame(&good));
    }

    proptest! {
        #[test]
        fn valid_frames_pass_letter_checks(bits in proptest::collection::vec(any::<u16>(), 4)) {
            let n = 2;
            let to_fam = |b: u16| fam(&(0..4u64).filter(|a| b >> a & 1 == 1).collect::<Vec<_>>());
            let f = AgencyFrame {
                n_worlds: n,
                nb: vec![vec![to_fam(bits[0]), to_fam(bits[1])]],
                nc: vec![vec![to_fam(bits[2]), to_fam(bits[3])]],
            };
            if validate_agency_frame(&f) {
                for w in 0..n {
                    prop_assert!(family_condition(&f.nb[0][w], w, n, Letter::C));
                    prop_assert!(family_condition(&f.nb[0][w], w, n, Letter::T));
                    prop_assert!(family_condition(&f.nc[0][w], w, n, Letter::P));
                    prop_assert!(family_condition(&f.nc[0][w], w, n, Letter::Q));
                }
            }
        }
    }
}
