//! The search command: stream every point set in a domain matching the
//! requested invariants.
//!
//! Exhaustive mode walks the domain in lexicographic order. Sampled mode
//! draws seeded uniform subsets and, under the default mixed strategy,
//! interleaves candidates built from the example-family generators so that
//! structured invariant combinations (high defect at high width) are
//! reachable; every emitted candidate is re-verified against the predicate
//! from scratch, so seeding never weakens the match condition.

use clap::Args;

use segre_lab::constructions::{
    gen_example_k2, gen_example_k3, gen_example_k4, gen_example_z1,
};
use segre_lab::dependence::{classification, defect, DependencyClass};
use segre_lab::error::Error;
use segre_lab::io::PointSetDoc;
use segre_lab::multiproj::{MultiprojectiveSpace, PointSet};
use segre_lab::theorems::{enumerate_domain, sample_domain, DEFAULT_BUDGET};

use crate::{parse_field, parse_shape, EXIT_BUDGET, EXIT_OK};

#[derive(Args)]
pub struct SearchArgs {
    /// Space shape as comma-separated factor dimensions.
    #[arg(long)]
    space: String,
    #[arg(long, default_value = "gf3")]
    field: String,
    /// Set size.
    #[arg(long)]
    size: usize,
    /// Required dependency class.
    #[arg(long)]
    class: Option<String>,
    /// Required defect e(S).
    #[arg(long)]
    defect: Option<usize>,
    /// Required width.
    #[arg(long)]
    width: Option<usize>,
    /// Require (or forbid, with =false) conciseness.
    #[arg(long)]
    concise: Option<bool>,
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Sample count for sampled mode.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Candidate strategy for sampled mode: uniform, or mixed with
    /// family-generator seeding.
    #[arg(long, default_value = "mixed")]
    strategy: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop after this many matches.
    #[arg(long)]
    limit: Option<u64>,
}

struct Predicate {
    class: Option<DependencyClass>,
    defect: Option<usize>,
    width: Option<usize>,
    concise: Option<bool>,
}

fn parse_class(s: &str) -> Result<DependencyClass, Error> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "independent" => DependencyClass::Independent,
        "circuit" => DependencyClass::Circuit,
        "uniformly-dependent" => DependencyClass::UniformlyDependent,
        "e-circuit" => DependencyClass::ECircuit,
        "equally-dependent" => DependencyClass::EquallyDependent,
        "dependent-other" => DependencyClass::DependentOther,
        other => {
            return Err(Error::Schema(format!(
                "unknown class `{other}`"
            )))
        }
    })
}

impl Predicate {
    fn matches(&self, set: &PointSet) -> Result<bool, Error> {
        if let Some(d) = self.defect {
            if defect(set)? != d {
                return Ok(false);
            }
        }
        if let Some(w) = self.width {
            if set.width()? != w {
                return Ok(false);
            }
        }
        if let Some(c) = self.concise {
            if set.is_concise()? != c {
                return Ok(false);
            }
        }
        if let Some(ref cls) = self.class {
            if classification(set)?.0 != *cls {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn cmd_search(args: SearchArgs) -> Result<u8, Error> {
    let field = parse_field(&args.field)?;
    let dims = parse_shape(&args.space)?;
    let space = MultiprojectiveSpace::new(dims, field)?;
    let predicate = Predicate {
        class: args.class.as_deref().map(parse_class).transpose()?,
        defect: args.defect,
        width: args.width,
        concise: args.concise,
    };
    let limit = args.limit.unwrap_or(u64::MAX);
    let mut emitted = 0u64;
    let mut emit = |set: &PointSet| -> Result<bool, Error> {
        println!("{}", PointSetDoc::from_set(set).to_json());
        emitted += 1;
        Ok(emitted >= limit)
    };

    match args.mode.to_ascii_lowercase().as_str() {
        "exhaustive" => {
            for set in enumerate_domain(&space, args.size, args.budget)? {
                if predicate.matches(&set)? && emit(&set)? {
                    break;
                }
            }
        }
        "sampled" => {
            let mixed = match args.strategy.to_ascii_lowercase().as_str() {
                "mixed" => true,
                "uniform" => false,
                other => {
                    return Err(Error::Schema(format!(
                        "unknown strategy `{other}` (expected mixed or uniform)"
                    )))
                }
            };
            let mut stop = false;
            if mixed {
                for cand in family_candidates(&space, args.size, args.seed) {
                    if predicate.matches(&cand)? && emit(&cand)? {
                        stop = true;
                        break;
                    }
                }
            }
            if !stop {
                if space.field().is_finite() {
                    for set in sample_domain(&space, args.size, args.samples, args.seed)? {
                        if predicate.matches(&set)? && emit(&set)? {
                            break;
                        }
                    }
                } else {
                    return Err(Error::UnsupportedDomain(
                        "sampled search over the rationals is limited to the \
                         family-seeded candidates"
                            .into(),
                    ));
                }
            }
        }
        other => {
            return Err(Error::Schema(format!(
                "unknown mode `{other}` (expected exhaustive or sampled)"
            )))
        }
    }
    eprintln!("search: {emitted} matches");
    Ok(EXIT_OK)
}

/// Candidates from the example families whose shape fits the requested
/// space, reordered into the requested factor order. Duplicates are fine:
/// each candidate is re-verified before emission.
fn family_candidates(space: &MultiprojectiveSpace, size: usize, seed: u64) -> Vec<PointSet> {
    let field = space.field();
    let dims = space.factor_dims();
    let k = dims.len();
    let mut out = Vec::new();
    let seeds = seed..seed + 10;

    // z1: five points of a plane.
    if size == 5 && dims == [2] {
        for s in seeds.clone() {
            if let Ok((_, set)) = gen_example_z1(field, s) {
                out.push(set);
            }
        }
    }
    if size == 6 {
        // k3 / k2 shapes: one special factor of dimension n plus lines, or
        // two special factors of dimensions in {1,2} plus lines.
        for s in seeds.clone() {
            for perm in fitting_permutations(dims, &[1]) {
                if let Ok((_, set)) = gen_example_k3(k, dims[perm[0]], field, s) {
                    if let Ok(reordered) = reorder_into(&set, &perm) {
                        out.push(reordered);
                    }
                }
            }
            for perm in fitting_permutations(dims, &[2]) {
                if k >= 2 {
                    if let Ok((_, set)) =
                        gen_example_k2(k, dims[perm[0]], dims[perm[1]], field, s)
                    {
                        if let Ok(reordered) = reorder_into(&set, &perm) {
                            out.push(reordered);
                        }
                    }
                }
            }
        }
    }
    if size >= 6 {
        for s in seeds {
            for perm in fitting_permutations(dims, &[1]) {
                if let Ok((_, set)) = gen_example_k4(k, dims[perm[0]], size, field, s) {
                    if let Ok(reordered) = reorder_into(&set, &perm) {
                        out.push(reordered);
                    }
                }
            }
        }
    }
    out
}

/// Permutations `perm` such that a family generated with its special
/// factors first can be reordered into the requested dims: perm[i] is the
/// requested-factor index receiving the generator's factor i. The first
/// `specials` generator factors may have any dimension; the rest must be
/// lines.
fn fitting_permutations(dims: &[usize], specials: &[usize]) -> Vec<Vec<usize>> {
    let k = dims.len();
    let n_special = specials[0];
    let mut out = Vec::new();
    if dims.iter().filter(|&&d| d != 1).count() > n_special {
        return out;
    }
    // Choose which requested factors host the generator's special slots;
    // all remaining requested factors must be lines.
    let mut choose = |slots: Vec<usize>| {
        let rest: Vec<usize> = (0..k).filter(|i| !slots.contains(i)).collect();
        if rest.iter().all(|&i| dims[i] == 1) {
            let mut perm = slots.clone();
            perm.extend(rest);
            out.push(perm);
        }
    };
    match n_special {
        1 => {
            for a in 0..k {
                choose(vec![a]);
            }
        }
        2 => {
            for a in 0..k {
                for b in 0..k {
                    if a != b {
                        choose(vec![a, b]);
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// The generator builds its space with special factors first; move each
/// generated factor i to requested position perm[i].
fn reorder_into(set: &PointSet, perm: &[usize]) -> Result<PointSet, Error> {
    // permute_factors takes: new factor f = old factor inv[f].
    let mut inv = vec![0usize; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    set.permute_factors(&inv)
}

pub(crate) use EXIT_BUDGET as _EXIT_BUDGET_USED;
