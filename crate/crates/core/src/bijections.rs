//! Constructive correspondences built from rotation and insertion.
//!
//! Notation used below:
//! * `A_m`: permutations of degree `m` fixing `m`;
//! * `C_n`: permutations of degree `n` whose erasure of `n` fixes `n - 1`;
//! * rotation by `t` means right multiplication by `γᵗ`, i.e. shifting the
//!   word `t` steps to the left.
//!
//! Rotating a permutation one step raises `maj` of its inverse by one
//! modulo the degree; when the permutation fixes its maximum the first
//! `n - 1` rotations raise it by exactly one each. Inserting the new maximum
//! leaves inverse `maj` unchanged modulo `n - 1` and sweeps `maj` through a
//! full run of `n` consecutive values.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::insertion::{insert_top, position_for_maj_residue};
use crate::perm::{all_permutations, Permutation};
use crate::scalar::{self};

/// Audit record of one forward step: `input` is rotated by
/// `rotation_exponent` to give `rotation`, then `n` is inserted at
/// `insert_position` to give `output`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionTrace {
    pub input: Permutation,
    pub rotation: Permutation,
    pub rotation_exponent: usize,
    pub insert_position: usize,
    pub output: Permutation,
}

impl BijectionTrace {
    /// Re-derives the output from the recorded steps.
    pub fn replay(&self, base: &Permutation) -> Result<Permutation> {
        insert_top(&base.rotate(self.rotation_exponent), self.insert_position)
    }

    /// True when replaying the steps on `base` yields `output`.
    pub fn is_consistent(&self, base: &Permutation) -> bool {
        self.replay(base).is_ok_and(|p| p == self.output)
            && base.rotate(self.rotation_exponent) == self.rotation
    }
}

/// Smallest `t` with `maj((p·γᵗ)⁻¹) ≡ residue (mod modulus)`, together with
/// the rotated permutation. `modulus` must divide the degree of `p`.
pub fn rotate_to_inverse_residue(
    p: &Permutation,
    residue: usize,
    modulus: usize,
) -> Result<(Permutation, usize)> {
    let m = p.degree();
    if modulus == 0 || !m.is_multiple_of(modulus) {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus} must divide the degree {m}"
        )));
    }
    if residue >= modulus {
        return Err(Error::InvalidArgument(format!(
            "residue {residue} must be below modulus {modulus}"
        )));
    }
    (0..m)
        .map(|t| (p.rotate(t), t))
        .find(|(r, _)| r.inverse_maj() % modulus == residue)
        .ok_or_else(|| Error::Internal(format!("no rotation of {p} reaches residue {residue}")))
}

/// The rotation `t` of a degree-`m` word that moves the letter `m` to the
/// last position.
fn fixing_rotation(p: &Permutation) -> usize {
    p.position_of(p.degree()) % p.degree()
}

/// `A_{n-1} → {σ ∈ S_n : maj σ ≡ i (mod n), maj σ⁻¹ ≡ j (mod n-1)}`.
///
/// Rotates `sigma` to the unique member of its class whose inverse has
/// `maj ≡ j (mod n-1)`, then inserts `n` at the unique slot that brings
/// `maj` to `i (mod n)`.
pub fn bijection_41_forward(sigma: &Permutation, i: usize, j: usize) -> Result<BijectionTrace> {
    let m = sigma.degree();
    let n = m + 1;
    if !sigma.fixes_max() {
        return Err(Error::Precondition(format!(
            "{sigma} must fix its largest letter {m}"
        )));
    }
    if i >= n {
        return Err(Error::InvalidArgument(format!(
            "i = {i} must be below n = {n}"
        )));
    }
    if j >= m {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below n-1 = {m}"
        )));
    }
    let (rotation, rotation_exponent) = rotate_to_inverse_residue(sigma, j, m)?;
    let insert_position = position_for_maj_residue(&rotation, i)?;
    let output = insert_top(&rotation, insert_position)?;
    Ok(BijectionTrace {
        input: sigma.clone(),
        rotation,
        rotation_exponent,
        insert_position,
        output,
    })
}

/// Erase `n`, then rotate so that `n - 1` is fixed.
pub fn bijection_41_inverse(tau: &Permutation) -> Result<Permutation> {
    let erased = tau.erase_max()?;
    Ok(erased.rotate(fixing_rotation(&erased)))
}

/// Membership in `C_n`.
pub fn in_c(tau: &Permutation) -> bool {
    tau.erase_max().is_ok_and(|e| e.fixes_max())
}

/// `C_n → {σ ∈ S_n : maj σ⁻¹ ≡ j (mod n-1)}`.
///
/// Erases `n`, rotates the remainder to inverse residue `j`, and puts `n`
/// back in the slot it came from.
pub fn bijection_42_forward(tau: &Permutation, j: usize) -> Result<BijectionTrace> {
    let n = tau.degree();
    if !in_c(tau) {
        return Err(Error::Precondition(format!(
            "{tau} is not in C_{n}: erasing {n} must leave {} fixed",
            n.saturating_sub(1)
        )));
    }
    let m = n - 1;
    if j >= m {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below n-1 = {m}"
        )));
    }
    let erased = tau.erase_max()?;
    let (rotation, rotation_exponent) = rotate_to_inverse_residue(&erased, j, m)?;
    let insert_position = tau.position_of(n);
    let output = insert_top(&rotation, insert_position)?;
    Ok(BijectionTrace {
        input: tau.clone(),
        rotation,
        rotation_exponent,
        insert_position,
        output,
    })
}

/// Undo [`bijection_42_forward`]: erase `n`, rotate `n - 1` back to the end,
/// reinsert `n` where it was.
pub fn bijection_42_inverse(sigma: &Permutation) -> Result<Permutation> {
    let n = sigma.degree();
    let erased = sigma.erase_max()?;
    let fixed = erased.rotate(fixing_rotation(&erased));
    insert_top(&fixed, sigma.position_of(n))
}

fn check_fixes_max(tau: &Permutation) -> Result<()> {
    if !tau.fixes_max() {
        return Err(Error::Precondition(format!(
            "{tau} must fix its largest letter {}",
            tau.degree()
        )));
    }
    Ok(())
}

/// For `τ ∈ A_n`, the unique rotation `σ = τγᵗ` with `t` in
/// `a-1 ..= a+k-2` and `maj(σ⁻¹) ≡ j (mod k)`. Because `τ` fixes `n`, the
/// first `n` rotations satisfy `maj((τγᵗ)⁻¹) = maj(τ⁻¹) + t` exactly, and
/// the chosen `σ` has `n-a-k+2 ≤ σ⁻¹(n) ≤ n-a+1`.
///
/// Returns `σ` and its exponent `t`.
pub fn lemma_43_select(
    tau: &Permutation,
    j: usize,
    k: usize,
    a: usize,
) -> Result<(Permutation, usize)> {
    check_fixes_max(tau)?;
    let n = tau.degree();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 1..={n}"
        )));
    }
    if j >= k {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below k = {k}"
        )));
    }
    if a == 0 || a > n - k + 1 {
        return Err(Error::InvalidArgument(format!(
            "a = {a} must lie in 1..={}",
            n - k + 1
        )));
    }
    let base = tau.inverse_maj();
    let t = (a - 1..=a + k - 2)
        .find(|t| (base + t) % k == j)
        .expect("k consecutive exponents cover every residue");
    Ok((tau.rotate(t), t))
}

/// For `τ ∈ A_n` and `n = qk + r`, the `s` rotations among `τγᵗ`,
/// `0 ≤ t < sk`, whose inverse has `maj ≡ j (mod k)`. Each lies in its own
/// block of `k` exponents and has `σ⁻¹(n) ∈ [n - sk + 1, n]`.
pub fn lemma_43_select_multi(
    tau: &Permutation,
    j: usize,
    k: usize,
    s: usize,
) -> Result<Vec<Permutation>> {
    check_fixes_max(tau)?;
    let n = tau.degree();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 1..={n}"
        )));
    }
    if j >= k {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below k = {k}"
        )));
    }
    let q = n / k;
    if s == 0 || s > q {
        return Err(Error::InvalidArgument(format!(
            "s = {s} must lie in 1..={q}"
        )));
    }
    let base = tau.inverse_maj();
    Ok((0..s * k)
        .filter(|t| (base + t) % k == j)
        .map(|t| tau.rotate(t))
        .collect())
}

/// Every `σ ∈ S_n` with `maj(σ⁻¹) ≡ j (mod k)`, assembled class by class
/// over `A_n`, sorted by word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircularCensus {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub members: Vec<Permutation>,
}

impl CircularCensus {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// For each `τ ∈ A_n` with `n = qk + r`: the `q` hits among the first `qk`
/// rotations, plus at most one among the trailing `r`, present exactly when
/// `maj(τ⁻¹) ≡ j - t (mod k)` for some `t < r`. The result is checked to be
/// `n!/k` distinct permutations.
pub fn count_by_circular_construction(n: usize, k: usize, j: usize) -> Result<CircularCensus> {
    crate::enumeration::check_ceiling(n)?;
    if k < 2 || k + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 2..={}",
            n.saturating_sub(1)
        )));
    }
    if j >= k {
        return Err(Error::InvalidArgument(format!(
            "j = {j} must be below k = {k}"
        )));
    }
    let (q, r) = (n / k, n % k);
    let mut members = Vec::new();
    for base in all_permutations(n - 1) {
        let tau = insert_top(&base, n)?;
        members.extend(lemma_43_select_multi(&tau, j, k, q)?);
        let imaj = tau.inverse_maj() % k;
        if let Some(t) = (0..r).find(|&t| (imaj + t) % k == j) {
            members.push(tau.rotate(q * k + t));
        }
    }
    members.sort();
    let before = members.len();
    members.dedup();
    if members.len() != before {
        return Err(Error::Internal(
            "circular construction produced duplicates".into(),
        ));
    }
    let expected: u64 = scalar::div_exact(&scalar::factorial(n)?, &(k as u64))?;
    if members.len() as u64 != expected {
        return Err(Error::Internal(format!(
            "circular construction gave {} permutations, expected {expected}",
            members.len()
        )));
    }
    Ok(CircularCensus { n, k, j, members })
}

/// One annotated cell of a [`ClassArray`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCell {
    pub word: Permutation,
    pub maj: usize,
    pub imaj: usize,
}

/// The `n × (n-1)` grid of one class: permutations whose erasure of `n`
/// is a rotation of `seed ∈ A_{n-1}`. Row `r` (top = 1) has `n` in
/// position `r`; column `c` (left = 1) erases to `seed·γ^{c-1}`. The bottom
/// row is therefore the rotations themselves with `n` appended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassArray {
    seed: Permutation,
    cells: Vec<Vec<ClassCell>>,
}

pub fn build_class_array(seed: &Permutation) -> Result<ClassArray> {
    check_fixes_max(seed)?;
    let m = seed.degree();
    let n = m + 1;
    let rotations = seed.circular_class();
    let cells = (1..=n)
        .map(|row| {
            rotations
                .iter()
                .map(|rot| {
                    let word = insert_top(rot, row)?;
                    Ok(ClassCell {
                        maj: word.maj(),
                        imaj: word.inverse_maj(),
                        word,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassArray {
        seed: seed.clone(),
        cells,
    })
}

impl ClassArray {
    pub fn seed(&self) -> &Permutation {
        &self.seed
    }

    pub fn rows(&self) -> &[Vec<ClassCell>] {
        &self.cells
    }

    /// 1-indexed `(row, column)`.
    pub fn cell(&self, row: usize, column: usize) -> &ClassCell {
        &self.cells[row - 1][column - 1]
    }

    pub fn degree(&self) -> usize {
        self.seed.degree() + 1
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassCell> {
        self.cells.iter().flatten()
    }

    /// `4123 (1,3)  4231 (4,4)  …`, one line per row.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.cells {
            let line: Vec<String> = row
                .iter()
                .map(|c| format!("{} ({},{})", c.word.display_word(), c.maj, c.imaj))
                .collect();
            writeln!(out, "{}", line.join("  ")).unwrap();
        }
        out
    }

    /// Checks the three structural properties of the grid: every column
    /// erases to one rotation, every column's `maj` values form a run of `n`
    /// consecutive integers, and every row's inverse `maj` values are a
    /// complete residue system mod `n - 1`.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.degree();
        let m = n - 1;
        for c in 1..=m {
            let rotation = self.seed.rotate(c - 1);
            let mut majs = Vec::with_capacity(n);
            for r in 1..=n {
                let cell = self.cell(r, c);
                let erased = cell.word.erase_max().map_err(|e| e.to_string())?;
                if erased != rotation {
                    return Err(format!(
                        "cell ({r},{c}) = {} does not erase to {rotation}",
                        cell.word
                    ));
                }
                majs.push(cell.maj);
            }
            if !crate::insertion::is_consecutive(&majs) || majs.len() != n {
                return Err(format!("column {c} majs {majs:?} are not consecutive"));
            }
        }
        for (r, row) in self.cells.iter().enumerate() {
            let mut residues: Vec<usize> = row.iter().map(|c| c.imaj % m).collect();
            residues.sort_unstable();
            if residues != (0..m).collect::<Vec<_>>() {
                return Err(format!(
                    "row {} inverse majs are not a complete residue system mod {m}",
                    r + 1
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_to_residue() {
        assert_eq!(
            rotate_to_inverse_residue(&p("21345"), 3, 5).unwrap(),
            (p("34521"), 2)
        );
        assert_eq!(
            rotate_to_inverse_residue(&p("3214"), 2, 4).unwrap(),
            (p("4321"), 3)
        );
        for m in [1, 3, 6] {
            let id = Permutation::identity(m);
            assert_eq!(
                rotate_to_inverse_residue(&id, 0, m).unwrap(),
                (id.clone(), 0)
            );
        }
        // modulus dividing the degree: smallest exponent wins
        let (r, t) = rotate_to_inverse_residue(&p("123456"), 1, 3).unwrap();
        assert_eq!((r, t), (p("234561"), 1));
        assert!(rotate_to_inverse_residue(&p("1234"), 0, 3).is_err());
        assert!(rotate_to_inverse_residue(&p("1234"), 4, 4).is_err());
    }

    #[test]
    fn forward_41_example() {
        let trace = bijection_41_forward(&p("21345"), 2, 3).unwrap();
        assert_eq!(trace.rotation, p("34521"));
        assert_eq!(trace.rotation.maj(), 7);
        assert_eq!(trace.insert_position, 5);
        assert_eq!(trace.output, p("345261"));
        assert!(trace.is_consistent(&p("21345")));
        assert_eq!(bijection_41_inverse(&p("345261")).unwrap(), p("21345"));
    }

    #[test]
    fn forward_41_identity_and_errors() {
        for n in 2..=6 {
            let out = bijection_41_forward(&Permutation::identity(n - 1), 0, 0).unwrap();
            assert_eq!(out.output, Permutation::identity(n));
            assert_eq!(
                bijection_41_inverse(&Permutation::identity(n)).unwrap(),
                Permutation::identity(n - 1)
            );
        }
        assert!(matches!(
            bijection_41_forward(&p("21354"), 0, 0),
            Err(Error::Precondition(_))
        ));
        assert!(bijection_41_forward(&p("21345"), 6, 0).is_err());
        assert!(bijection_41_forward(&p("21345"), 0, 5).is_err());
    }

    #[test]
    fn forward_41_degree_4_against_census() {
        // Seeds of A_3 are 123 and 213; the (i, j) = (1, 3 mod 3 = 0) cell.
        let images: Vec<_> = ["123", "213"]
            .iter()
            .map(|s| bijection_41_forward(&p(s), 1, 0).unwrap().output)
            .collect();
        let mut census: Vec<_> = all_permutations(4)
            .filter(|x| x.maj() % 4 == 1 && x.inverse_maj() % 3 == 0)
            .collect();
        let mut images_sorted = images.clone();
        images_sorted.sort();
        census.sort();
        assert_eq!(images_sorted, census);
        assert_eq!(images, vec![p("4123"), p("3421")]);
    }

    #[test]
    fn inverse_41_reaches_seed() {
        assert_eq!(bijection_41_inverse(&p("43251")).unwrap(), p("3214"));
        let seed = bijection_41_inverse(&p("43251")).unwrap();
        let back = bijection_41_forward(&seed, p("43251").maj() % 5, p("43251").inverse_maj() % 4)
            .unwrap();
        assert_eq!(back.output, p("43251"));
    }

    #[test]
    fn forward_42_example() {
        let tau = p("32154");
        assert!(in_c(&tau));
        assert_eq!(tau.erase_max().unwrap().inverse_maj(), 3);
        let trace = bijection_42_forward(&tau, 2).unwrap();
        assert_eq!(trace.rotation, p("4321"));
        assert_eq!(trace.rotation_exponent, 3);
        assert_eq!(trace.output, p("43251"));
        assert_eq!(trace.output.inverse_maj() % 4, 2);
        assert_eq!(trace.output.position_of(5), tau.position_of(5));
        assert_eq!(bijection_42_inverse(&p("43251")).unwrap(), tau);
        assert_eq!(
            bijection_42_forward(&p("12345"), 0).unwrap().output,
            p("12345")
        );
        assert!(bijection_42_forward(&p("43125"), 0).is_err());
    }

    #[test]
    fn forward_42_degree_4_set() {
        let c4: Vec<_> = all_permutations(4).filter(in_c).collect();
        assert_eq!(c4.len(), 8);
        let mut images: Vec<_> = c4
            .iter()
            .map(|t| bijection_42_forward(t, 1).unwrap().output)
            .collect();
        images.sort();
        let target: Vec<_> = all_permutations(4)
            .filter(|x| x.inverse_maj() % 3 == 1)
            .collect();
        assert_eq!(images, target);
    }

    #[test]
    fn select_single() {
        let (s, t) = lemma_43_select(&p("1234"), 2, 3, 1).unwrap();
        assert_eq!((s.clone(), t), (p("3412"), 2));
        let pos = s.position_of(4);
        assert!((2..=4).contains(&pos));
        // k = n, a = 1: the class member with inverse maj ≡ j (mod n).
        let tau = p("21435");
        for j in 0..5 {
            let (s, _) = lemma_43_select(&tau, j, 5, 1).unwrap();
            assert_eq!(s.inverse_maj() % 5, j);
            assert!(tau.circular_class().contains(&s));
        }
        assert!(lemma_43_select(&p("2143"), 0, 2, 1).is_err());
        assert!(lemma_43_select(&p("1234"), 0, 3, 3).is_err());
        assert!(lemma_43_select(&p("1234"), 3, 3, 1).is_err());
    }

    #[test]
    fn select_single_counts_degree_5() {
        for j in 0..3 {
            let mut outs: Vec<_> = all_permutations(4)
                .map(|b| {
                    lemma_43_select(&insert_top(&b, 5).unwrap(), j, 3, 2)
                        .unwrap()
                        .0
                })
                .collect();
            outs.sort();
            outs.dedup();
            assert_eq!(outs.len(), 24);
            for s in &outs {
                assert_eq!(s.inverse_maj() % 3, j);
                assert!((2..=4).contains(&s.position_of(5)));
            }
        }
    }

    #[test]
    fn select_multi() {
        let got = lemma_43_select_multi(&p("12345"), 0, 2, 2).unwrap();
        assert_eq!(got, vec![p("12345"), p("34512")]);
        let (single, _) = lemma_43_select(&p("21435"), 3, 5, 1).unwrap();
        assert_eq!(
            lemma_43_select_multi(&p("21435"), 3, 5, 1).unwrap(),
            vec![single]
        );
        let total: usize = all_permutations(4)
            .map(|b| {
                lemma_43_select_multi(&insert_top(&b, 5).unwrap(), 1, 2, 2)
                    .unwrap()
                    .len()
            })
            .sum();
        assert_eq!(total, 48);
        assert!(lemma_43_select_multi(&p("12345"), 0, 2, 3).is_err());
        assert!(lemma_43_select_multi(&p("12345"), 0, 2, 0).is_err());
    }

    #[test]
    fn circular_construction() {
        let c = count_by_circular_construction(4, 3, 0).unwrap();
        assert_eq!(c.count(), 8);
        let c = count_by_circular_construction(5, 4, 2).unwrap();
        assert_eq!(c.count(), 30);
        assert!(c.members.binary_search(&p("43251")).is_ok());
        for j in 0..4 {
            let via_construction = count_by_circular_construction(5, 4, j).unwrap().count();
            let via_42 = all_permutations(5).filter(in_c).count();
            assert_eq!(via_construction, via_42);
        }
        assert!(count_by_circular_construction(5, 5, 0).is_err());
        assert!(count_by_circular_construction(5, 1, 0).is_err());
    }

    #[test]
    fn class_arrays() {
        let t1 = build_class_array(&p("123")).unwrap();
        assert_eq!(t1.cell(1, 1).word, p("4123"));
        assert_eq!((t1.cell(1, 1).maj, t1.cell(1, 1).imaj), (1, 3));
        assert_eq!(
            (
                t1.cell(2, 2).word.clone(),
                t1.cell(2, 2).maj,
                t1.cell(2, 2).imaj
            ),
            (p("2431"), 5, 4)
        );
        assert_eq!(
            (
                t1.cell(2, 3).word.clone(),
                t1.cell(2, 3).maj,
                t1.cell(2, 3).imaj
            ),
            (p("3412"), 2, 2)
        );
        let t2 = build_class_array(&p("213")).unwrap();
        assert_eq!(
            (
                t2.cell(1, 1).word.clone(),
                t2.cell(1, 1).maj,
                t2.cell(1, 1).imaj
            ),
            (p("4213"), 3, 4)
        );
        assert_eq!(
            (
                t2.cell(1, 3).word.clone(),
                t2.cell(1, 3).maj,
                t2.cell(1, 3).imaj
            ),
            (p("4321"), 6, 6)
        );
        let mut union: Vec<_> = t1.iter().chain(t2.iter()).map(|c| c.word.clone()).collect();
        union.sort();
        union.dedup();
        assert_eq!(union, all_permutations(4).collect::<Vec<_>>());
        t1.check_invariants().unwrap();
        t2.check_invariants().unwrap();
        let tiny = build_class_array(&p("1")).unwrap();
        assert_eq!(tiny.render_text(), "21 (1,1)\n12 (0,0)\n");
        assert!(build_class_array(&p("132")).is_err());
    }
}
