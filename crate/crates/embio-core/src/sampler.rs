//! Deterministic per-identity sampling plans and their execution.
//!
//! A plan assigns each of K entries a source direction (round-robin over
//! the identity's first few sources) and an interpolation factor drawn
//! from a Beta distribution with a per-entry derived seed. Executing the
//! plan walks the geodesic from the prototype toward each chosen source.
//! Because every entry seeds its own generator from
//! (global seed, label, entry index), output never depends on scheduling
//! order or worker count.
//!
//! `gen_clusters` produces labeled synthetic clusters on the sphere and
//! stands in for encoder outputs in tests and pipeline rehearsals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hypersphere::{self, BetaParams, Embedding};
use crate::identitybank::IdentityRecord;
use crate::vecmath;

/// Images generated per identity (K).
pub const DEFAULT_IMAGES_PER_ID: usize = 20;

/// Round-robin cap on how many sources per identity receive directions.
pub const DEFAULT_MAX_SOURCES: usize = 5;

/// Default Beta shape for interpolation factors (symmetric).
pub const DEFAULT_ALPHA: f64 = 2.0;
/// Companion shape parameter; symmetric with [`DEFAULT_ALPHA`].
pub const DEFAULT_BETA: f64 = 2.0;

/// Downstream decoder multiplicity recorded in plan manifests. Metadata
/// only: nothing in this crate multiplies outputs by it.
pub const DEFAULT_DECODE_MULTIPLICITY: u32 = 5;

/// One planned sample: which source direction, which interpolation factor,
/// and the derived seed the factor was drawn with.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry {
    pub index: u32,
    pub direction: u32,
    pub lambda: f64,
    pub seed: u64,
}

/// A deterministic sampling plan for one identity. Pure data: regenerating
/// it from the same (global seed, label, parameters) reproduces it exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub label: String,
    pub entries: Vec<PlanEntry>,
    pub decode_multiplicity: u32,
}

/// Knobs for plan generation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanParams {
    pub images_per_id: usize,
    pub beta: BetaParams,
    pub max_sources: usize,
    pub global_seed: u64,
}

impl PlanParams {
    /// Defaults (K=20, Beta(2,2), 5 sources) with the given seed.
    pub fn new(global_seed: u64) -> Self {
        PlanParams {
            images_per_id: DEFAULT_IMAGES_PER_ID,
            beta: BetaParams::new(DEFAULT_ALPHA, DEFAULT_BETA).expect("valid defaults"),
            max_sources: DEFAULT_MAX_SOURCES,
            global_seed,
        }
    }
}

/// Synthetic cluster layout: unit centers with Gaussian perturbations
/// shrunk by `concentration` (larger = tighter).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    pub num_identities: usize,
    pub dim: usize,
    pub samples_per_id: usize,
    pub concentration: f64,
    pub seed: u64,
}

impl ClusterSpec {
    pub fn new(
        num_identities: usize,
        dim: usize,
        samples_per_id: usize,
        concentration: f64,
        seed: u64,
    ) -> Result<Self> {
        if num_identities == 0 || samples_per_id == 0 {
            return Err(Error::InvalidParameter {
                what: "cluster counts must be >= 1".into(),
            });
        }
        if dim < 2 {
            return Err(Error::InvalidParameter {
                what: format!("cluster dim must be >= 2, got {dim}"),
            });
        }
        if !concentration.is_finite() || concentration <= 0.0 {
            return Err(Error::InvalidParameter {
                what: format!("concentration must be positive and finite, got {concentration}"),
            });
        }
        Ok(ClusterSpec {
            num_identities,
            dim,
            samples_per_id,
            concentration,
            seed,
        })
    }
}

/// SplitMix64 finalizer: avalanche one 64-bit word.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a per-entry seed from (global seed, label, entry index) by
/// folding the label bytes through the SplitMix64 finalizer. Stable within
/// a build and independent of scheduling order.
pub fn mix_seed(global_seed: u64, label: &str, index: u64) -> u64 {
    let mut h = splitmix64(global_seed);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        h = splitmix64(h ^ u64::from_le_bytes(word));
    }
    h = splitmix64(h ^ label.len() as u64);
    splitmix64(h ^ index)
}

/// Build the sampling plan for one identity: entry `j` points along source
/// `j mod min(S, max_sources)` with a Beta-distributed lambda drawn from a
/// generator seeded by [`mix_seed`]. No embedding math happens here.
pub fn make_plan(record: &IdentityRecord, params: &PlanParams) -> Result<SamplePlan> {
    if params.images_per_id == 0 {
        return Err(Error::InvalidParameter {
            what: "images_per_id must be >= 1".into(),
        });
    }
    if params.max_sources == 0 {
        return Err(Error::InvalidParameter {
            what: "max_sources must be >= 1".into(),
        });
    }
    let usable_sources = record.sources().len().min(params.max_sources);
    let entries = (0..params.images_per_id)
        .map(|j| {
            let seed = mix_seed(params.global_seed, record.label(), j as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PlanEntry {
                index: j as u32,
                direction: (j % usable_sources) as u32,
                lambda: hypersphere::sample_lambda(&params.beta, &mut rng),
                seed,
            }
        })
        .collect();
    Ok(SamplePlan {
        label: record.label().to_string(),
        entries,
        decode_multiplicity: DEFAULT_DECODE_MULTIPLICITY,
    })
}

/// Execute a plan against its identity record: one slerp from the
/// prototype toward the chosen source per entry. Errors carry the entry
/// index.
pub fn execute_plan(record: &IdentityRecord, plan: &SamplePlan) -> Result<Vec<Embedding>> {
    if plan.label != record.label() {
        return Err(Error::PlanMismatch {
            plan_label: plan.label.clone(),
            record_label: record.label().to_string(),
        });
    }
    plan.entries
        .iter()
        .map(|entry| {
            let direction = entry.direction as usize;
            let source = record.sources().get(direction).ok_or(Error::IndexOutOfRange {
                index: direction,
                count: record.sources().len(),
            })?;
            hypersphere::slerp(record.prototype(), source, entry.lambda)
                .map_err(|e| e.at_entry(entry.index as usize))
        })
        .collect()
}

/// Label for cluster `i`: zero-padded so lexicographic equals numeric order.
pub fn cluster_label(i: usize) -> String {
    format!("id_{i:05}")
}

/// Generate labeled synthetic clusters: per identity, a random unit center
/// and `samples_per_id` normalized perturbations of it. Fully determined by
/// `spec.seed`; identities use independent derived seeds.
pub fn gen_clusters(spec: &ClusterSpec) -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::with_capacity(spec.num_identities * spec.samples_per_id);
    for i in 0..spec.num_identities {
        let label = cluster_label(i);
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(spec.seed, &label, 0));
        let center = random_unit(&mut rng, spec.dim);
        for _ in 0..spec.samples_per_id {
            let sample: Vec<f64> = center
                .iter()
                .map(|c| {
                    let noise: f64 = rng.sample(StandardNormal);
                    c + noise / spec.concentration
                })
                .collect();
            let norm = vecmath::l2_norm(&sample);
            // The center is unit, so the perturbed vector collapsing to
            // zero would need the noise to cancel it exactly.
            assert!(norm > hypersphere::ZERO_NORM_FLOOR, "cluster sample collapsed");
            out.push((label.clone(), sample.iter().map(|x| x / norm).collect()));
        }
    }
    out
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = vecmath::l2_norm(&v);
        if norm > hypersphere::ZERO_NORM_FLOOR {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersphere::{angle, cosine};
    use crate::identitybank::build_bank;

    fn record_with_sources(n: usize) -> IdentityRecord {
        let sources: Vec<Vec<f64>> = (0..n)
            .map(|s| {
                let mut v = vec![0.0; 8];
                v[0] = 1.0;
                v[1 + s % 7] = 0.3;
                v
            })
            .collect();
        IdentityRecord::new("subject", &sources).unwrap()
    }

    #[test]
    fn directions_round_robin_over_five_sources() {
        let record = record_with_sources(5);
        let plan = make_plan(&record, &PlanParams::new(99)).unwrap();
        assert_eq!(plan.entries.len(), 20);
        let directions: Vec<u32> = plan.entries.iter().map(|e| e.direction).collect();
        let expected: Vec<u32> = (0..20).map(|j| (j % 5) as u32).collect();
        assert_eq!(directions, expected);
        for d in 0..5u32 {
            assert_eq!(directions.iter().filter(|x| **x == d).count(), 4);
        }
    }

    #[test]
    fn single_source_maps_every_entry_to_it() {
        let record = record_with_sources(1);
        let mut params = PlanParams::new(1);
        params.images_per_id = 3;
        let plan = make_plan(&record, &params).unwrap();
        assert!(plan.entries.iter().all(|e| e.direction == 0));
    }

    #[test]
    fn cap_limits_directions_when_sources_exceed_it() {
        let record = record_with_sources(7);
        let plan = make_plan(&record, &PlanParams::new(5)).unwrap();
        assert!(plan.entries.iter().all(|e| e.direction < 5));
    }

    #[test]
    fn plans_are_reproducible() {
        let record = record_with_sources(5);
        let params = PlanParams::new(0xDEAD_BEEF);
        let a = make_plan(&record, &params).unwrap();
        let b = make_plan(&record, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lambda_lies_in_unit_interval() {
        let record = record_with_sources(5);
        let mut params = PlanParams::new(3);
        params.images_per_id = 200;
        let plan = make_plan(&record, &params).unwrap();
        assert!(plan
            .entries
            .iter()
            .all(|e| (0.0..=1.0).contains(&e.lambda)));
    }

    #[test]
    fn mix_seed_separates_labels_and_entries() {
        let a = mix_seed(1, "id_00000", 0);
        assert_eq!(a, mix_seed(1, "id_00000", 0));
        assert_ne!(a, mix_seed(1, "id_00000", 1));
        assert_ne!(a, mix_seed(1, "id_00001", 0));
        assert_ne!(a, mix_seed(2, "id_00000", 0));
    }

    #[test]
    fn zero_lambda_reproduces_prototype() {
        let record = record_with_sources(3);
        let mut plan = make_plan(&record, &PlanParams::new(4)).unwrap();
        for e in &mut plan.entries {
            e.lambda = 0.0;
        }
        let out = execute_plan(&record, &plan).unwrap();
        for e in out {
            let c = cosine(&e, record.prototype()).unwrap();
            assert!((c - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn unit_lambda_reproduces_sources() {
        let record = record_with_sources(3);
        let mut plan = make_plan(&record, &PlanParams::new(4)).unwrap();
        for e in &mut plan.entries {
            e.lambda = 1.0;
        }
        let out = execute_plan(&record, &plan).unwrap();
        for (entry, e) in plan.entries.iter().zip(&out) {
            let src = &record.sources()[entry.direction as usize];
            let c = cosine(e, src).unwrap();
            assert!((c - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn executed_samples_stay_within_source_angles() {
        let manifest = gen_clusters(&ClusterSpec::new(1, 128, 5, 10.0, 21).unwrap());
        let bank = build_bank(manifest).unwrap();
        let record = &bank[0];
        let plan = make_plan(record, &PlanParams::new(8)).unwrap();
        let out = execute_plan(record, &plan).unwrap();
        let max_theta = record
            .sources()
            .iter()
            .map(|s| angle(record.prototype(), s).unwrap())
            .fold(0.0f64, f64::max);
        for (entry, sample) in plan.entries.iter().zip(&out) {
            let theta_dir = angle(
                record.prototype(),
                &record.sources()[entry.direction as usize],
            )
            .unwrap();
            let got = angle(record.prototype(), sample).unwrap();
            assert!(got <= entry.lambda * theta_dir + 1e-6);
            assert!(got <= max_theta + 1e-6);
        }
    }

    #[test]
    fn mangled_direction_is_out_of_range() {
        let record = record_with_sources(2);
        let mut plan = make_plan(&record, &PlanParams::new(0)).unwrap();
        plan.entries[3].direction = 9;
        assert!(matches!(
            execute_plan(&record, &plan),
            Err(Error::IndexOutOfRange { index: 9, count: 2 })
        ));
    }

    #[test]
    fn plan_label_must_match_record() {
        let record = record_with_sources(2);
        let other = IdentityRecord::new("other", &[vec![1.0; 8]]).unwrap();
        let plan = make_plan(&record, &PlanParams::new(0)).unwrap();
        assert!(matches!(
            execute_plan(&other, &plan),
            Err(Error::PlanMismatch { .. })
        ));
    }

    #[test]
    fn huge_concentration_pins_samples_to_center() {
        let spec = ClusterSpec::new(3, 16, 4, 1e9, 5).unwrap();
        let data = gen_clusters(&spec);
        assert_eq!(data.len(), 12);
        for ids in data.chunks(4) {
            let first = &ids[0].1;
            for (_, v) in ids {
                for (a, b) in v.iter().zip(first) {
                    assert!((a - b).abs() < 1e-4);
                }
            }
        }
    }

    #[test]
    fn clusters_separate_within_vs_across() {
        // Brute-force pairwise cosine matrix: within-identity cosines must
        // beat cross-identity cosines for >= 99% of combinations.
        let spec = ClusterSpec::new(10, 64, 5, 20.0, 77).unwrap();
        let data = gen_clusters(&spec);
        assert_eq!(data.len(), 50);
        let embs: Vec<(String, Embedding)> = data
            .iter()
            .map(|(l, v)| (l.clone(), Embedding::from_values(v.clone())))
            .collect();
        let mut within = Vec::new();
        let mut across = Vec::new();
        for (i, (la, ea)) in embs.iter().enumerate() {
            for (lb, eb) in embs.iter().skip(i + 1) {
                let c = cosine(ea, eb).unwrap();
                if la == lb {
                    within.push(c);
                } else {
                    across.push(c);
                }
            }
        }
        let mut wins = 0usize;
        for w in &within {
            wins += across.iter().filter(|c| w > c).count();
        }
        let total = within.len() * across.len();
        assert!(
            wins as f64 >= 0.99 * total as f64,
            "within > across for only {wins}/{total} combinations"
        );
    }

    #[test]
    fn cluster_generation_is_deterministic() {
        let spec = ClusterSpec::new(4, 32, 3, 15.0, 123).unwrap();
        assert_eq!(gen_clusters(&spec), gen_clusters(&spec));
    }

    #[test]
    fn plan_lambdas_follow_the_beta_distribution() {
        // Pool lambdas over many identities: per-entry generators must not
        // distort the Beta(2,2) moments (mean 1/2, variance 1/20).
        let manifest = gen_clusters(&ClusterSpec::new(200, 8, 5, 15.0, 3).unwrap());
        let bank = build_bank(manifest).unwrap();
        let params = PlanParams::new(17);
        let lambdas: Vec<f64> = bank
            .iter()
            .flat_map(|record| {
                make_plan(record, &params)
                    .unwrap()
                    .entries
                    .into_iter()
                    .map(|e| e.lambda)
            })
            .collect();
        assert_eq!(lambdas.len(), 200 * 20);
        let n = lambdas.len() as f64;
        let mean = lambdas.iter().sum::<f64>() / n;
        let variance = lambdas.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        assert!((variance - 0.05).abs() < 0.005, "variance {variance}");
    }
}
