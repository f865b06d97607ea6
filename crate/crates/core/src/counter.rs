use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::csp::{ac_count, partition_to_csp_or_zero};
use crate::error::{Error, Result};
use crate::family::{ListFamily, ListFunction};
use crate::graph::Graph;
use crate::matrix::PartitionMatrix;
use crate::meta::{classify, Classification, SearchLimits};
use crate::purify::purify;

#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions {
    /// Count even when the classifier reports #P-completeness or runs out
    /// of budget. The result is exact if it is returned, but the algorithm
    /// may stop with [`Error::DepthExceeded`].
    pub unsafe_count: bool,
    pub limits: SearchLimits,
    /// Sum purification branches on the rayon pool.
    pub parallel: bool,
}

/// Counter for a fixed matrix and list family. The tractability check runs
/// once, at construction.
#[derive(Clone, Debug)]
pub struct ListPartitionCounter {
    m: PartitionMatrix,
    fam: ListFamily,
    options: CountOptions,
    verdict: Classification,
}

impl ListPartitionCounter {
    pub fn new(m: PartitionMatrix, fam: ListFamily, options: CountOptions) -> Result<Self> {
        let verdict = classify(&m, &fam, options.limits);
        if !options.unsafe_count {
            match &verdict {
                Classification::Hard(cert) => return Err(Error::Refused(cert.clone())),
                Classification::Inconclusive => return Err(Error::Inconclusive),
                Classification::Tractable => {}
            }
        }
        Ok(ListPartitionCounter {
            m,
            fam,
            options,
            verdict,
        })
    }

    /// Counter for a parameter pair already known to be tractable, skipping
    /// the classifier.
    pub(crate) fn trusted(m: PartitionMatrix, fam: ListFamily) -> Self {
        ListPartitionCounter {
            m,
            fam,
            options: CountOptions::default(),
            verdict: Classification::Tractable,
        }
    }

    pub fn matrix(&self) -> &PartitionMatrix {
        &self.m
    }

    pub fn family(&self) -> &ListFamily {
        &self.fam
    }

    pub fn verdict(&self) -> &Classification {
        &self.verdict
    }

    /// Number of `M`-partitions of `g` respecting `lists`.
    pub fn count(&self, g: &Graph, lists: &ListFunction) -> Result<BigUint> {
        lists.validate(g, &self.fam)?;
        if self.fam.is_purifying(&self.m) {
            return count_purified(g, lists, &self.m);
        }
        let branches = purify(g, lists, &self.fam, &self.m)?;
        if self.options.parallel {
            branches
                .par_iter()
                .map(|li| count_purified(g, li, &self.m))
                .try_reduce(BigUint::zero, |a, b| Ok(a + b))
        } else {
            branches.iter().try_fold(BigUint::zero(), |acc, li| {
                Ok(acc + count_purified(g, li, &self.m)?)
            })
        }
    }
}

fn count_purified(g: &Graph, lists: &ListFunction, m: &PartitionMatrix) -> Result<BigUint> {
    match partition_to_csp_or_zero(g, lists, m)? {
        Some(inst) => ac_count(&inst),
        None => Ok(BigUint::zero()),
    }
}

/// Number of list `M`-partitions of `g`; every list must lie in `fam`.
pub fn count_list_partitions(
    g: &Graph,
    lists: &ListFunction,
    fam: &ListFamily,
    m: &PartitionMatrix,
    options: CountOptions,
) -> Result<BigUint> {
    ListPartitionCounter::new(m.clone(), fam.clone(), options)?.count(g, lists)
}

/// Number of `M`-partitions of `g`, i.e. every list is `D`.
pub fn count_partitions(g: &Graph, m: &PartitionMatrix, options: CountOptions) -> Result<BigUint> {
    let fam = ListFamily::full(m.size());
    count_list_partitions(g, &ListFunction::constant(g.n(), m.all()), &fam, m, options)
}
