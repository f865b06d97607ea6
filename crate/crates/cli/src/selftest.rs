use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use listpart::oracle::{brute_count, DEFAULT_BUDGET};
use listpart::{
    Classification, CountOptions, Entry, Error, Graph, ListFamily, ListFunction,
    ListPartitionCounter, PartSet, PartSubset, PartitionMatrix,
};

pub struct Summary {
    pub trials: usize,
    pub compared: usize,
    pub refused: usize,
    pub mismatches: usize,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trials {} compared {} refused {} mismatches {}",
            self.trials, self.compared, self.refused, self.mismatches
        )
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> PartitionMatrix {
    let mut entries = vec![Entry::Star; d * d];
    for i in 0..d {
        for j in i..d {
            let e = [Entry::Zero, Entry::One, Entry::Star][rng.gen_range(0..3)];
            entries[i * d + j] = e;
            entries[j * d + i] = e;
        }
    }
    PartitionMatrix::new(PartSet::numbered(d).expect("small part set"), entries).expect("symmetric")
}

/// Random instances with at most 6 vertices and 3 parts, counted both ways
/// whenever the classifier accepts them.
pub fn run(seed: u64, trials: usize) -> Result<Summary, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Summary {
        trials,
        compared: 0,
        refused: 0,
        mismatches: 0,
    };
    for _ in 0..trials {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(0..=6);
        let m = random_matrix(&mut rng, d);
        let members: Vec<PartSubset> = (0..rng.gen_range(1..=3))
            .map(|_| PartSubset::from_bits(rng.gen_range(1..1u128 << d)))
            .collect();
        let fam = ListFamily::new(d, members.iter().copied());
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v)?;
                }
            }
        }
        let lists = ListFunction::new(
            (0..n)
                .map(|_| {
                    let x = members[rng.gen_range(0..members.len())];
                    x & PartSubset::from_bits(rng.gen_range(0..1u128 << d))
                })
                .collect(),
        );
        let counter = match ListPartitionCounter::new(m.clone(), fam, CountOptions::default()) {
            Ok(c) => c,
            Err(Error::Refused(_)) | Err(Error::Inconclusive) => {
                s.refused += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        debug_assert_eq!(counter.verdict(), &Classification::Tractable);
        s.compared += 1;
        if counter.count(&g, &lists)? != brute_count(&g, &lists, &m, DEFAULT_BUDGET)? {
            s.mismatches += 1;
        }
    }
    Ok(s)
}
