//! Braid words, their closures, and the Artin action.
//!
//! A plane curve singularity link is encoded as the closure of a braid.
//! This module derives everything the rest of the crate needs from the
//! word alone: the partition of strands into link components, the linking
//! matrix (half signed inter-component crossing counts), a finite
//! presentation of the link complement group, and the braid obtained by
//! deleting components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::Presentation;

/// A word in the braid group B_n, stored as signed generator indices:
/// letter `k` is the positive crossing of strands at positions k, k+1 and
/// `-k` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

/// Serde carrier for the braid input format: `{"strands": n, "word": [..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidInput {
    pub strands: usize,
    pub word: Vec<i32>,
}

impl TryFrom<BraidInput> for BraidWord {
    type Error = Error;
    fn try_from(input: BraidInput) -> Result<BraidWord> {
        BraidWord::new(input.strands, input.word)
    }
}

impl BraidWord {
    /// Validates that every letter k satisfies 1 <= |k| <= strands - 1.
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::MalformedBraid(
                "braid needs at least 1 strand".into(),
            ));
        }
        for &letter in &letters {
            let idx = letter.unsigned_abs() as usize;
            if letter == 0 || idx >= strands {
                return Err(Error::InvalidBraidLetter { letter, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// The underlying permutation: entry `p - 1` is the strand (1-based)
    /// ending at position p, found by walking the occupancy of positions
    /// through the word.
    fn final_occupancy(&self) -> Vec<usize> {
        let mut occupant: Vec<usize> = (1..=self.strands).collect();
        for &letter in &self.letters {
            let k = letter.unsigned_abs() as usize;
            occupant.swap(k - 1, k);
        }
        occupant
    }

    /// Partition of strands into closure components (permutation cycles).
    pub fn components(&self) -> ComponentPartition {
        let occupant = self.final_occupancy();
        // next[s-1] = strand whose start position equals s's end position
        let mut end_position = vec![0usize; self.strands];
        for (pos, &strand) in occupant.iter().enumerate() {
            end_position[strand - 1] = pos + 1;
        }
        let mut label = vec![0usize; self.strands];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 1..=self.strands {
            if label[start - 1] != 0 {
                continue;
            }
            let c = cycles.len() + 1;
            let mut cycle = Vec::new();
            let mut s = start;
            while label[s - 1] == 0 {
                label[s - 1] = c;
                cycle.push(s);
                s = end_position[s - 1];
            }
            cycle.sort_unstable();
            cycles.push(cycle);
        }
        ComponentPartition {
            strand_labels: label,
            cycles,
        }
    }

    /// Linking matrix of the closure: l_ab is half the signed count of
    /// crossings between strands of components a and b.
    pub fn linking_matrix(&self) -> Result<LinkingMatrix> {
        let partition = self.components();
        let r = partition.count();
        let mut twice = vec![vec![0i64; r]; r];
        let mut occupant: Vec<usize> = (1..=self.strands).collect();
        for &letter in &self.letters {
            let k = letter.unsigned_abs() as usize;
            let a = partition.label_of_strand(occupant[k - 1])?;
            let b = partition.label_of_strand(occupant[k])?;
            if a != b {
                let sign = letter.signum() as i64;
                twice[a - 1][b - 1] += sign;
                twice[b - 1][a - 1] += sign;
            }
            occupant.swap(k - 1, k);
        }
        let mut entries = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                if twice[i][j] % 2 != 0 {
                    return Err(Error::MalformedBraid(format!(
                        "odd signed crossing count between components {} and {}",
                        i + 1,
                        j + 1
                    )));
                }
                entries[i][j] = twice[i][j] / 2;
            }
        }
        Ok(LinkingMatrix { entries })
    }

    /// Presentation of the closure complement group: one generator per
    /// strand, relators beta(x_j) x_j^{-1} for j = 1..n-1 (the last closure
    /// relation is redundant and dropped). Meridian labels come from the
    /// component partition.
    pub fn artin_presentation(&self) -> Result<Presentation> {
        self.artin_presentation_dropping(self.strands - 1)
    }

    /// Same presentation but omitting the closure relator of generator
    /// `dropped` (0-based) instead of the last one. Any single relator is
    /// redundant; this variant exists so tests can check independence.
    pub fn artin_presentation_dropping(&self, dropped: usize) -> Result<Presentation> {
        if self.strands > 0 && dropped >= self.strands {
            return Err(Error::InvalidArgument(format!(
                "cannot drop relator {} of {}",
                dropped, self.strands
            )));
        }
        let images = self.artin_images();
        let mut relators = Vec::with_capacity(self.strands.saturating_sub(1));
        for (j, image) in images.into_iter().enumerate() {
            if j == dropped {
                continue;
            }
            let mut relator = image;
            relator.push(-((j + 1) as i32));
            relators.push(free_reduce(relator));
        }
        let labels = self.components().strand_labels;
        Presentation::new(self.strands, labels, relators)
    }

    /// Images beta(x_1)..beta(x_n) under the Artin action of the whole word.
    ///
    /// sigma_k maps x_k to x_k x_{k+1} x_k^{-1} and x_{k+1} to x_k; its
    /// inverse maps x_k to x_{k+1} and x_{k+1} to x_{k+1}^{-1} x_k x_{k+1}.
    /// Letters act left to right by rewriting the accumulated image words.
    fn artin_images(&self) -> Vec<Vec<i32>> {
        let mut images: Vec<Vec<i32>> = (1..=self.strands as i32).map(|j| vec![j]).collect();
        for &letter in &self.letters {
            let k = letter.unsigned_abs() as i32;
            for image in images.iter_mut() {
                let mut rewritten = Vec::with_capacity(image.len() + 2);
                for &symbol in image.iter() {
                    match (letter > 0, symbol) {
                        (true, s) if s == k => rewritten.extend([k, k + 1, -k]),
                        (true, s) if s == -k => rewritten.extend([k, -(k + 1), -k]),
                        (true, s) if s == k + 1 => rewritten.push(k),
                        (true, s) if s == -(k + 1) => rewritten.push(-k),
                        (false, s) if s == k => rewritten.push(k + 1),
                        (false, s) if s == -k => rewritten.push(-(k + 1)),
                        (false, s) if s == k + 1 => rewritten.extend([-(k + 1), k, k + 1]),
                        (false, s) if s == -(k + 1) => rewritten.extend([-(k + 1), -k, k + 1]),
                        (_, s) => rewritten.push(s),
                    }
                }
                *image = free_reduce(rewritten);
            }
        }
        images
    }

    /// Removes every strand belonging to one of the named components and
    /// reindexes the survivors; the result closes to the link with those
    /// components deleted.
    pub fn delete_components(&self, labels: &[usize]) -> Result<BraidWord> {
        let partition = self.components();
        let r = partition.count();
        let mut delete = std::collections::BTreeSet::new();
        for &label in labels {
            if label == 0 || label > r {
                return Err(Error::InvalidComponent {
                    label,
                    components: r,
                });
            }
            delete.insert(label);
        }
        if delete.len() >= r {
            return Err(Error::ComponentUnderflow);
        }
        let doomed: Vec<bool> = (1..=self.strands)
            .map(|s| delete.contains(&partition.strand_labels[s - 1]))
            .collect();
        let mut occupant: Vec<usize> = (1..=self.strands).collect();
        let mut letters = Vec::new();
        for &letter in &self.letters {
            let k = letter.unsigned_abs() as usize;
            let lower_doomed = doomed[occupant[k - 1] - 1];
            let upper_doomed = doomed[occupant[k] - 1];
            if !lower_doomed && !upper_doomed {
                let new_index = occupant[..k].iter().filter(|&&s| !doomed[s - 1]).count() as i32;
                letters.push(letter.signum() * new_index);
            }
            occupant.swap(k - 1, k);
        }
        let survivors = doomed.iter().filter(|d| !**d).count();
        BraidWord::new(survivors, letters)
    }

    pub fn delete_component(&self, label: usize) -> Result<BraidWord> {
        self.delete_components(&[label])
    }
}

/// Cancels adjacent inverse pairs until the word is freely reduced.
pub fn free_reduce(word: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for symbol in word {
        if out.last().is_some_and(|&top| top == -symbol) {
            out.pop();
        } else {
            out.push(symbol);
        }
    }
    out
}

/// Assignment of strands to closure components, labeled 1..r in order of
/// smallest member strand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    strand_labels: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    /// Component label (1-based) of a 1-based strand index.
    pub fn label_of_strand(&self, strand: usize) -> Result<usize> {
        self.strand_labels
            .get(strand - 1)
            .copied()
            .ok_or_else(|| Error::MalformedBraid(format!("no strand {}", strand)))
    }

    /// Strands of each component; entry c-1 lists the strands with label c,
    /// ascending.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// Per-strand labels, indexed by strand - 1.
    pub fn strand_labels(&self) -> &[usize] {
        &self.strand_labels
    }
}

/// Symmetric integer matrix of pairwise linking numbers, zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    /// Builds from explicit entries, checking symmetry and zero diagonal.
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let r = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != r {
                return Err(Error::MatrixShape("linking matrix must be square".into()));
            }
            if row[i] != 0 {
                return Err(Error::MalformedBraid(format!(
                    "nonzero diagonal linking entry at component {}",
                    i + 1
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if entries[j][i] != v {
                    return Err(Error::MalformedBraid(format!(
                        "asymmetric linking entries at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(LinkingMatrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Linking number of components i and j (1-based).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i - 1][j - 1]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// The matrix with the rows and columns of the given labels removed.
    pub fn delete(&self, labels: &[usize]) -> Result<LinkingMatrix> {
        let r = self.size();
        let mut drop = vec![false; r];
        for &label in labels {
            if label == 0 || label > r {
                return Err(Error::InvalidComponent {
                    label,
                    components: r,
                });
            }
            drop[label - 1] = true;
        }
        let keep: Vec<usize> = (0..r).filter(|&i| !drop[i]).collect();
        if keep.is_empty() {
            return Err(Error::ComponentUnderflow);
        }
        let entries = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        Ok(LinkingMatrix { entries })
    }
}
