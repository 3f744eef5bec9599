use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oppwelfare::model::transform::{transform_converge, transform_permute, transform_scale};
use oppwelfare::{IncomeDistribution, Society, TypeUtilities, Utility};

/// Shape of randomly generated societies.
#[derive(Debug, Clone, PartialEq)]
pub struct SocietyProfile {
    pub min_types: usize,
    /// At most 8.
    pub max_types: usize,
    /// Size of the shared income pool; at most 16.
    pub max_support: usize,
    pub income_range: (f64, f64),
    /// Resample until supported types differ in log expected utility by at
    /// least this much.
    pub distinct_gap: Option<f64>,
    pub uniform_shares: bool,
    /// Lower bound on each drawn share before normalization.
    pub share_floor: f64,
}

impl Default for SocietyProfile {
    fn default() -> Self {
        Self {
            min_types: 1,
            max_types: 8,
            max_support: 16,
            income_range: (0.1, 100.0),
            distinct_gap: None,
            uniform_shares: false,
            share_floor: 0.05,
        }
    }
}

impl SocietyProfile {
    pub fn distinct(mut self, gap: f64) -> Self {
        self.min_types = self.min_types.max(2);
        self.distinct_gap = Some(gap);
        self
    }

    pub fn uniform(mut self) -> Self {
        self.uniform_shares = true;
        self
    }

    pub fn types(mut self, min: usize, max: usize) -> Self {
        self.min_types = min;
        self.max_types = max;
        self
    }
}

/// Seeded society generator. The same seed and profile always produce the
/// same society.
#[derive(Debug, Clone)]
pub struct SocietyGenerator {
    rng: ChaCha8Rng,
    profile: SocietyProfile,
}

impl SocietyGenerator {
    pub fn new(seed: u64, profile: SocietyProfile) -> Self {
        assert!(profile.max_types <= 8 && profile.max_types >= profile.min_types.max(1));
        assert!(profile.max_support <= 16 && profile.max_support >= 1);
        Self { rng: ChaCha8Rng::seed_from_u64(seed), profile }
    }

    pub fn next_society(&mut self) -> Society {
        loop {
            let s = self.draw();
            match self.profile.distinct_gap {
                Some(gap) if !has_distinct_utilities(&s, gap) => continue,
                _ => return s,
            }
        }
    }

    fn draw(&mut self) -> Society {
        let p = &self.profile;
        let rng = &mut self.rng;
        let n_types = rng.random_range(p.min_types.max(1)..=p.max_types);
        let pool_size = rng.random_range(1..=p.max_support);
        let (lo, hi) = (p.income_range.0.ln(), p.income_range.1.ln());

        // Log-uniform pool; neighbours at least 1% apart so utility tables
        // built on the pool stay strictly increasing under small bumps.
        let mut pool: Vec<f64> = Vec::with_capacity(pool_size);
        while pool.len() < pool_size {
            let y = round_income(rng.random_range(lo..=hi).exp());
            if pool.iter().all(|&z| (y / z).ln().abs() > 0.01) {
                pool.push(y);
            }
        }

        let raw_shares: Vec<f64> =
            (0..n_types).map(|_| if p.uniform_shares { 1.0 } else { rng.random_range(p.share_floor..1.0) }).collect();
        let total: f64 = raw_shares.iter().sum();

        let parts: Vec<(String, f64, IncomeDistribution)> = raw_shares
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let mut picks: Vec<f64> = pool.clone();
                picks.shuffle(rng);
                picks.truncate(rng.random_range(1..=pool.len()));
                let probs: Vec<f64> = picks.iter().map(|_| rng.random_range(0.05..1.0)).collect();
                let mass: f64 = probs.iter().sum();
                let dist = IncomeDistribution::new(picks.into_iter().zip(probs.into_iter().map(|x| x / mass)))
                    .expect("generated distribution is valid");
                (format!("s{i}"), w / total, dist)
            })
            .collect();
        Society::from_parts(parts).expect("generated society is valid")
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Incomes rounded to 6 significant digits keep fixture files readable.
fn round_income(y: f64) -> f64 {
    let mag = 10f64.powi(5 - y.log10().floor() as i32);
    (y * mag).round() / mag
}

fn has_distinct_utilities(s: &Society, gap: f64) -> bool {
    let tu = TypeUtilities::of(s, &Utility::log()).expect("log utility is total");
    let mut us: Vec<f64> = tu.supported().map(|(_, v)| v).collect();
    us.sort_by(f64::total_cmp);
    us.len() >= 2 && us.windows(2).all(|w| w[1] - w[0] >= gap)
}

/// One society per seed.
pub fn generate(seed: u64, profile: &SocietyProfile) -> Society {
    SocietyGenerator::new(seed, profile.clone()).next_society()
}

/// `n` societies from consecutive seeds starting at `seed`.
pub fn generate_many(seed: u64, n: usize, profile: &SocietyProfile) -> Vec<Society> {
    (0..n as u64).map(|i| generate(seed.wrapping_add(i), profile)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(S, λS)` with `λ > 1`.
    Scale,
    /// `(converge(S, s, s', 0), S)` with equal shares of `s`, `s'`.
    Converge,
    /// `(S, permute(S))` with uniform shares.
    Permute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedRelation {
    Dominated,
    DominatesOrEquivalent,
    Equivalent,
}

impl ExpectedRelation {
    pub fn admits(self, r: oppwelfare::Relation) -> bool {
        use oppwelfare::Relation as R;
        match self {
            ExpectedRelation::Dominated => r == R::Dominated,
            ExpectedRelation::DominatesOrEquivalent => matches!(r, R::Dominates | R::Equivalent),
            ExpectedRelation::Equivalent => r == R::Equivalent,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KnownPair {
    pub a: Society,
    pub b: Society,
    pub kind: PairKind,
    pub expected: ExpectedRelation,
    pub detail: String,
}

/// A pair of societies whose dominance relation under log utility follows
/// from its construction. The construction cycles with the seed.
pub fn generate_pair_with_known_relation(seed: u64) -> KnownPair {
    let kind = match seed % 3 {
        0 => PairKind::Scale,
        1 => PairKind::Converge,
        _ => PairKind::Permute,
    };
    match kind {
        PairKind::Scale => {
            let mut g = SocietyGenerator::new(seed, SocietyProfile::default());
            let s = g.next_society();
            let lambda: f64 = g.rng().random_range(1.1..5.0);
            let b = transform_scale(&s, lambda).expect("positive scale");
            KnownPair { a: s, b, kind, expected: ExpectedRelation::Dominated, detail: format!("scale by {lambda}") }
        }
        PairKind::Converge => {
            let mut g = SocietyGenerator::new(seed, SocietyProfile::default().uniform().distinct(1e-3));
            let s = g.next_society();
            let tu = TypeUtilities::of(&s, &Utility::log()).expect("log utility is total");
            let (lo, hi) = extreme_types(&tu);
            let (la, lb) = (s.types()[lo].label().to_string(), s.types()[hi].label().to_string());
            let a = transform_converge(&s, &la, &lb, 0.0).expect("labels exist");
            KnownPair {
                a,
                b: s,
                kind,
                expected: ExpectedRelation::DominatesOrEquivalent,
                detail: format!("converge {la} and {lb}"),
            }
        }
        PairKind::Permute => {
            let mut g = SocietyGenerator::new(seed, SocietyProfile::default().uniform().types(2, 8));
            let s = g.next_society();
            let mut perm: Vec<usize> = (0..s.len()).collect();
            perm.shuffle(g.rng());
            let b = transform_permute(&s, &perm).expect("bijection");
            KnownPair { a: s, b, kind, expected: ExpectedRelation::Equivalent, detail: format!("permute {perm:?}") }
        }
    }
}

/// Indices of the worst-off and best-off supported types.
fn extreme_types(tu: &TypeUtilities) -> (usize, usize) {
    let idx: Vec<usize> = (0..tu.len()).filter(|&i| tu.shares()[i] > 0.0).collect();
    let u = tu.utilities();
    let lo = *idx.iter().min_by(|&&i, &&j| u[i].total_cmp(&u[j])).unwrap();
    let hi = *idx.iter().max_by(|&&i, &&j| u[i].total_cmp(&u[j])).unwrap();
    (lo, hi)
}
