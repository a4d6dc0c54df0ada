//! Strong-map tests between oriented matroids on a common ground set.
//!
//! A strong map `source -> target` exists when every covector of the target
//! is a covector of the source. For a uniform target this reduces to tope
//! inclusion.

use serde::{Deserialize, Serialize};

use crate::error::{OmError, Result};
use crate::matroid::{CovectorSet, TopeSet};
use crate::signed::SignedVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrongMapMethod {
    CovectorContainment,
    TopeInclusion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongMapVerdict {
    pub holds: bool,
    pub method: StrongMapMethod,
    pub corank: i64,
    /// First target covector (or tope) missing from the source.
    pub witness: Option<SignedVector>,
}

fn check_ground(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(OmError::GroundSetMismatch { left, right })
    }
}

/// `target ⊆ source` on canonical topes. Only meaningful for a uniform target.
pub fn is_strong_map_topes(source: &TopeSet, target: &TopeSet) -> Result<StrongMapVerdict> {
    check_ground(source.n(), target.n())?;
    let witness = target.iter().find(|t| !source.contains(t)).copied();
    Ok(StrongMapVerdict {
        holds: witness.is_none(),
        method: StrongMapMethod::TopeInclusion,
        corank: source.rank() as i64 - target.rank() as i64,
        witness,
    })
}

/// `L_target ⊆ L_source`.
pub fn is_strong_map_covectors(
    source: &CovectorSet,
    target: &CovectorSet,
) -> Result<StrongMapVerdict> {
    check_ground(source.n(), target.n())?;
    let witness = target.iter().find(|x| !source.contains(x)).copied();
    Ok(StrongMapVerdict {
        holds: witness.is_none(),
        method: StrongMapMethod::CovectorContainment,
        corank: source.rank() as i64 - target.rank() as i64,
        witness,
    })
}

/// Every full-support completion of `x` is a tope. For uniform matroids and
/// nonzero `x` this is equivalent to `x` being a covector.
pub fn is_covector_by_extension(x: &SignedVector, topes: &TopeSet) -> Result<bool> {
    check_ground(x.len(), topes.n())?;
    Ok(x.full_support_extensions()?
        .iter()
        .all(|t| topes.contains(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chirotope::Chirotope;
    use crate::matroid::{covectors_from_topes, for_each_signed_vector};

    fn topes_of(chi: &Chirotope) -> TopeSet {
        TopeSet::from_chirotope(chi).unwrap()
    }

    fn alt(n: usize) -> TopeSet {
        topes_of(&Chirotope::alternating(n, 4).unwrap())
    }

    fn m2(n: usize) -> TopeSet {
        topes_of(&Chirotope::m2(n).unwrap())
    }

    #[test]
    fn tope_inclusion_examples() {
        let v = is_strong_map_topes(&alt(6), &m2(6)).unwrap();
        assert!(v.holds);
        assert_eq!(v.corank, 2);
        assert_eq!(v.witness, None);

        let v8 = is_strong_map_topes(&alt(8), &m2(8)).unwrap();
        assert!(v8.holds);
        assert_eq!(v8.corank, 2);

        let back = is_strong_map_topes(&m2(6), &alt(6)).unwrap();
        assert!(!back.holds);
        let w = back.witness.unwrap();
        assert!(alt(6).contains(&w) && !m2(6).contains(&w));
        // lexicographically first missing tope
        assert_eq!(w, *alt(6).iter().find(|t| !m2(6).contains(t)).unwrap());

        assert!(is_strong_map_topes(&alt(6), &m2(8)).is_err());
    }

    #[test]
    fn covector_containment_examples() {
        let la = covectors_from_topes(&alt(6)).unwrap();
        let lm = covectors_from_topes(&m2(6)).unwrap();
        let v = is_strong_map_covectors(&la, &lm).unwrap();
        assert!(v.holds);
        assert_eq!(v.corank, 2);
        let refl = is_strong_map_covectors(&la, &la).unwrap();
        assert!(refl.holds);
        assert_eq!(refl.corank, 0);
        let back = is_strong_map_covectors(&lm, &la).unwrap();
        assert!(!back.holds);
        assert!(back.witness.is_some());
    }

    #[test]
    fn extension_examples() {
        let a = alt(6);
        let m = m2(6);
        let x: SignedVector = "+-+-00".parse().unwrap();
        assert!(!is_covector_by_extension(&x, &a).unwrap());
        for t in a.iter() {
            assert!(is_covector_by_extension(t, &a).unwrap());
        }
        let zero = SignedVector::zero(m.ground());
        assert!(!is_covector_by_extension(&zero, &m).unwrap());
        assert!(is_covector_by_extension(&zero, &a).is_ok());
    }

    #[test]
    fn extension_criterion_matches_covector_membership() {
        for t in [
            alt(6),
            m2(6),
            topes_of(&Chirotope::alternating(6, 3).unwrap()),
        ] {
            let l = covectors_from_topes(&t).unwrap();
            // zero is always a covector, yet its completions are every full-support vector
            for_each_signed_vector(6, |x| {
                if x.is_zero() {
                    assert!(l.contains(&x) && !is_covector_by_extension(&x, &t).unwrap());
                    return;
                }
                assert_eq!(
                    is_covector_by_extension(&x, &t).unwrap(),
                    l.contains(&x),
                    "{x}"
                );
            });
        }
    }
}
