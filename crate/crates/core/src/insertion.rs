//! Inserting the new maximum `n` into a permutation of degree `n - 1`.
//!
//! Writing `σ_k` for the base with `n` spliced in at position `k`, the major
//! indices of `σ_1, …, σ_n` are exactly the interval
//! `[maj(base), maj(base) + n - 1]`, and the inverse major index moves by
//! either `0` or `n - 1`. Both facts are what make residue-targeted
//! insertion possible.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `σ_position`: the base word with `n = base.degree() + 1` inserted so that
/// it lands at `position` (1-indexed, `1..=n`).
pub fn insert_top(base: &Permutation, position: usize) -> Result<Permutation> {
    let n = base.degree() + 1;
    check_position(position, n)?;
    let mut word = Vec::with_capacity(n);
    word.extend_from_slice(&base.word()[..position - 1]);
    word.push(n);
    word.extend_from_slice(&base.word()[position - 1..]);
    Ok(Permutation::from_word_unchecked(word))
}

fn check_position(position: usize, max: usize) -> Result<()> {
    if position == 0 || position > max {
        return Err(Error::PositionOutOfRange { position, max });
    }
    Ok(())
}

/// `maj(σ_k) - maj(base)` from the descent positions alone.
///
/// With descents `i_1 < … < i_d` of the base:
/// * `k = i_j + 1` gives `d - j + 1`;
/// * `k ≤ i_1` gives `d + k`;
/// * `i_j + 1 < k ≤ i_{j+1}` gives `d - j + k`;
/// * `i_d + 2 ≤ k ≤ n - 1` gives `k`;
/// * `k = n` gives `0`.
pub fn maj_delta(base: &Permutation, k: usize) -> Result<usize> {
    let n = base.degree() + 1;
    check_position(k, n)?;
    if k == n {
        return Ok(0);
    }
    let descents = base.descent_set();
    let ds = descents.positions();
    let d = ds.len();
    // Descent immediately before the slot: n lands right after a_{i_j}.
    if let Some(j) = ds.iter().position(|&i| i + 1 == k) {
        return Ok(d - (j + 1) + 1);
    }
    match ds.first() {
        None => Ok(k),
        Some(&first) if k <= first => Ok(d + k),
        Some(_) => {
            // j = number of descents strictly left of the slot.
            let j = ds.iter().take_while(|&&i| i + 1 < k).count();
            if j == d {
                Ok(k)
            } else {
                Ok(d - j + k)
            }
        }
    }
}

/// Insertion positions in order of increasing `maj`: first `n` itself, then
/// the slots just after each descent from the right-most leftwards, then the
/// remaining slots left to right. Walking it raises `maj` by exactly one per
/// step.
pub fn insertion_order(base: &Permutation) -> Vec<usize> {
    let n = base.degree() + 1;
    let descents = base.descent_set();
    let after_descent: Vec<usize> = descents.positions().iter().rev().map(|&i| i + 1).collect();
    let mut order = Vec::with_capacity(n);
    order.push(n);
    order.extend(after_descent.iter().copied());
    order.extend((1..n).filter(|&k| !descents.contains(k - 1)));
    order
}

/// All insertions of `n` into one base, with their major indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionProfile {
    base: Permutation,
    majs: Vec<usize>,
    order: Vec<usize>,
}

impl InsertionProfile {
    pub fn new(base: &Permutation) -> Self {
        let n = base.degree() + 1;
        let majs = (1..=n)
            .map(|k| insert_top(base, k).expect("position in range").maj())
            .collect();
        Self {
            base: base.clone(),
            majs,
            order: insertion_order(base),
        }
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    /// `majs()[k - 1] = maj(σ_k)`.
    pub fn majs(&self) -> &[usize] {
        &self.majs
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Sorted major indices are `maj(base), …, maj(base) + n - 1`.
    pub fn is_interval(&self) -> bool {
        let mut sorted = self.majs.clone();
        sorted.sort_unstable();
        let start = self.base.maj();
        sorted.iter().enumerate().all(|(t, &m)| m == start + t)
    }

    /// Walking `order` visits `maj(base), maj(base) + 1, …`.
    pub fn order_is_increasing_by_one(&self) -> bool {
        let start = self.base.maj();
        self.order
            .iter()
            .enumerate()
            .all(|(t, &k)| self.majs[k - 1] == start + t)
    }
}

/// Positions `k` with `maj(σ_k) ≡ residue (mod modulus)`, in increasing
/// `maj` order. When `modulus` divides `n` there are exactly `n / modulus`.
pub fn positions_for_maj_residue(
    base: &Permutation,
    residue: usize,
    modulus: usize,
) -> Result<Vec<usize>> {
    let n = base.degree() + 1;
    if modulus == 0 || modulus > n {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus} must lie in 1..={n}"
        )));
    }
    if residue >= modulus {
        return Err(Error::InvalidArgument(format!(
            "residue {residue} must be below modulus {modulus}"
        )));
    }
    let start = base.maj();
    let found: Vec<usize> = insertion_order(base)
        .into_iter()
        .enumerate()
        .filter(|(t, _)| (start + t) % modulus == residue)
        .map(|(_, k)| k)
        .collect();
    if n.is_multiple_of(modulus) && found.len() != n / modulus {
        return Err(Error::Internal(format!(
            "expected {} insertion positions for residue {residue} mod {modulus}, found {}",
            n / modulus,
            found.len()
        )));
    }
    Ok(found)
}

/// The unique position `k` with `maj(σ_k) ≡ residue (mod n)`.
pub fn position_for_maj_residue(base: &Permutation, residue: usize) -> Result<usize> {
    let n = base.degree() + 1;
    let found = positions_for_maj_residue(base, residue, n)?;
    match found.as_slice() {
        [k] => Ok(*k),
        _ => Err(Error::Internal(format!(
            "residue {residue} mod {n} matched {} positions",
            found.len()
        ))),
    }
}

/// `maj(base⁻¹)` against `maj(σ_position⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InverseMajShift {
    pub before: usize,
    pub after: usize,
}

impl InverseMajShift {
    pub fn difference(&self) -> usize {
        self.after - self.before
    }

    /// The shift is `0` or `n - 1`, hence invisible modulo `n - 1`.
    pub fn preserved_mod(&self, modulus: usize) -> bool {
        self.after >= self.before && self.difference().is_multiple_of(modulus)
    }
}

/// Inserting `n` only ever adds the descent `n - 1` to the inverse, and
/// only when `n` lands left of `n - 1`.
pub fn inverse_maj_shift(base: &Permutation, position: usize) -> Result<InverseMajShift> {
    let lifted = insert_top(base, position)?;
    Ok(InverseMajShift {
        before: base.inverse_maj(),
        after: lifted.inverse_maj(),
    })
}

/// Insertions `σ_start, …, σ_end` whose major indices are not a run of
/// consecutive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonConsecutiveWindow {
    pub base: Permutation,
    pub start: usize,
    pub end: usize,
    pub majs: Vec<usize>,
}

/// Major indices of `σ_start, …, σ_end`.
pub fn window_majs(base: &Permutation, start: usize, end: usize) -> Result<Vec<usize>> {
    let n = base.degree() + 1;
    check_position(start, n)?;
    check_position(end, n)?;
    if start > end {
        return Err(Error::InvalidArgument(format!(
            "window {start}..={end} is empty"
        )));
    }
    (start..=end)
        .map(|k| insert_top(base, k).map(|p| p.maj()))
        .collect()
}

/// Distinct values forming an unbroken run.
pub fn is_consecutive(values: &[usize]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[1] == w[0] + 1)
}

/// First window `σ_j, …, σ_{j+r}` with `j > 1`, `r ≥ 1` whose major
/// indices are not consecutive. Bases are scanned in lexicographic order,
/// windows by start then length.
pub fn find_nonconsecutive_window(n: usize) -> Result<Option<NonConsecutiveWindow>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree {n} leaves no window to examine"
        )));
    }
    for base in crate::perm::all_permutations(n - 1) {
        let majs = InsertionProfile::new(&base).majs;
        for start in 2..n {
            for end in start + 1..=n {
                let window = &majs[start - 1..end];
                if !is_consecutive(window) {
                    return Ok(Some(NonConsecutiveWindow {
                        base,
                        start,
                        end,
                        majs: window.to_vec(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn insert_examples() {
        let base = p("14253");
        assert_eq!(insert_top(&base, 6).unwrap(), p("142536"));
        assert_eq!(insert_top(&base, 6).unwrap().maj(), 6);
        assert_eq!(insert_top(&base, 1).unwrap(), p("614253"));
        assert_eq!(insert_top(&base, 1).unwrap().maj(), 9);
        assert_eq!(insert_top(&p("123"), 4).unwrap(), p("1234"));
        assert_eq!(
            insert_top(&base, 7),
            Err(Error::PositionOutOfRange {
                position: 7,
                max: 6
            })
        );
        assert!(insert_top(&base, 0).is_err());
    }

    #[test]
    fn delta_cases() {
        let base = p("14253");
        assert_eq!(maj_delta(&base, 5).unwrap(), 1);
        assert_eq!(maj_delta(&base, 1).unwrap(), 3);
        assert_eq!(maj_delta(&base, 6).unwrap(), 0);
        // 142563, 146253, 164253, 142653 have maj 7, 8, 10, 11.
        assert_eq!(maj_delta(&base, 3).unwrap(), 2);
        assert_eq!(maj_delta(&base, 2).unwrap(), 4);
        assert_eq!(maj_delta(&base, 4).unwrap(), 5);
        assert_eq!(maj_delta(&p("321"), 4).unwrap(), 0);
        assert!(maj_delta(&base, 7).is_err());
    }

    #[test]
    fn delta_matches_recomputation_up_to_7() {
        for m in 1..=7 {
            for base in all_permutations(m) {
                for k in 1..=m + 1 {
                    let direct = insert_top(&base, k).unwrap().maj() - base.maj();
                    assert_eq!(maj_delta(&base, k).unwrap(), direct, "{base:?} at {k}");
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let base = p("14253");
        let order = insertion_order(&base);
        assert_eq!(order, vec![6, 5, 3, 1, 2, 4]);
        let words: Vec<_> = order
            .iter()
            .map(|&k| insert_top(&base, k).unwrap().compact().unwrap())
            .collect();
        assert_eq!(
            words,
            ["142536", "142563", "146253", "614253", "164253", "142653"]
        );
        assert_eq!(insertion_order(&p("12345")), vec![6, 1, 2, 3, 4, 5]);
        assert_eq!(insertion_order(&p("321")), vec![4, 3, 2, 1]);
    }

    #[test]
    fn profile_invariants() {
        let profile = InsertionProfile::new(&p("14253"));
        assert_eq!(profile.majs(), &[9, 10, 8, 11, 7, 6]);
        assert!(profile.is_interval());
        assert!(profile.order_is_increasing_by_one());
        assert_eq!(profile.majs()[5], profile.base().maj());
    }

    #[test]
    fn residue_positions() {
        assert_eq!(position_for_maj_residue(&p("34521"), 2).unwrap(), 5);
        assert_eq!(
            position_for_maj_residue(&Permutation::identity(5), 0).unwrap(),
            6
        );
        assert_eq!(
            positions_for_maj_residue(&p("14253"), 1, 2).unwrap(),
            vec![5, 1, 4]
        );
        // modulus not dividing n: 6 slots, residues mod 4 appear 2, 2, 1, 1 times.
        let counts: Vec<usize> = (0..4)
            .map(|r| positions_for_maj_residue(&p("14253"), r, 4).unwrap().len())
            .collect();
        assert_eq!(counts.iter().sum::<usize>(), 6);
        assert!(positions_for_maj_residue(&p("14253"), 2, 2).is_err());
        assert!(positions_for_maj_residue(&p("14253"), 0, 7).is_err());
    }

    #[test]
    fn inverse_shift_examples() {
        let s = inverse_maj_shift(&p("3214"), 5).unwrap();
        assert_eq!((s.before, s.after, s.difference()), (3, 3, 0));
        let s = inverse_maj_shift(&p("4321"), 4).unwrap();
        assert_eq!((s.before, s.after), (6, 6));
        let s = inverse_maj_shift(&p("4321"), 1).unwrap();
        assert_eq!((s.before, s.after, s.difference()), (6, 10, 4));
        assert!(s.preserved_mod(4));
        for k in 1..=5 {
            let d = inverse_maj_shift(&Permutation::identity(4), k)
                .unwrap()
                .difference();
            assert!(d == 0 || d == 4);
        }
    }

    #[test]
    fn nonconsecutive_windows() {
        let base = p("14253");
        let majs = window_majs(&base, 3, 4).unwrap();
        assert_eq!(majs, vec![8, 11]);
        assert!(!is_consecutive(&majs));
        // The first n = 3 candidate: base 12, σ_2 = 132 and σ_3 = 123.
        let w = find_nonconsecutive_window(3).unwrap().unwrap();
        assert_eq!((w.base.clone(), w.start, w.end), (p("12"), 2, 3));
        assert_eq!(w.majs, vec![2, 0]);
        assert_eq!(find_nonconsecutive_window(2).unwrap(), None);
        for n in [4, 5, 6] {
            let w = find_nonconsecutive_window(n).unwrap().expect("witness");
            assert!(w.start > 1);
            assert_eq!(window_majs(&w.base, w.start, w.end).unwrap(), w.majs);
            assert!(!is_consecutive(&w.majs));
        }
        assert!(find_nonconsecutive_window(1).is_err());
    }
}
