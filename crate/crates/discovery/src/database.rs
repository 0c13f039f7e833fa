//! Island-model program database.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{DiscoveryError, Result};
use crate::sandbox::ScoredProgram;

/// Default number of programs kept per island.
pub const DEFAULT_ISLAND_CAPACITY: usize = 50;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Island {
    /// Kept sorted best first; ties keep registration order.
    programs: Vec<ScoredProgram>,
}

impl Island {
    pub fn programs(&self) -> &[ScoredProgram] {
        &self.programs
    }

    pub fn best(&self) -> Option<&ScoredProgram> {
        self.programs.first()
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }
}

/// What a reset did.
#[derive(Debug, Clone, PartialEq)]
pub struct ResetEvent {
    /// Islands that were cleared, weakest first.
    pub reset: Vec<usize>,
    /// `(reset island, founder island)` pairs.
    pub founders: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IslandDatabase {
    islands: Vec<Island>,
    capacity: usize,
}

impl IslandDatabase {
    pub fn new(islands: usize, capacity: usize) -> Self {
        assert!(islands > 0 && capacity > 0);
        Self {
            islands: vec![Island::default(); islands],
            capacity,
        }
    }

    pub fn islands(&self) -> &[Island] {
        &self.islands
    }

    pub fn island_count(&self) -> usize {
        self.islands.len()
    }

    pub fn len(&self) -> usize {
        self.islands.iter().map(Island::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn best_score(&self, island: usize) -> Option<f64> {
        self.islands[island].best().map(ScoredProgram::score)
    }

    /// Best program over all islands; ties go to the lower island.
    pub fn global_best(&self) -> Option<&ScoredProgram> {
        self.islands
            .iter()
            .filter_map(Island::best)
            .fold(None, |acc: Option<&ScoredProgram>, p| match acc {
                Some(b) if b.score() <= p.score() => Some(b),
                _ => Some(p),
            })
    }

    /// Adds a program to its island. Returns `false` when the island already
    /// holds the same expression text, or when the island is full and the
    /// program is no better than its worst member.
    pub fn register(&mut self, program: ScoredProgram) -> bool {
        let capacity = self.capacity;
        let island = &mut self.islands[program.island()];
        if island.programs.iter().any(|p| p.text() == program.text()) {
            return false;
        }
        if island.programs.len() >= capacity {
            let worst = island.programs.last().expect("full island").score();
            if program.score() >= worst {
                return false;
            }
            island.programs.pop();
        }
        let at = island.programs.partition_point(|p| p.score() <= program.score());
        island.programs.insert(at, program);
        true
    }

    /// Picks an island uniformly and draws up to `k` of its programs without
    /// replacement, weight `1 / rank` (rank 1 = best). The result runs from
    /// worst to best, so the strongest program comes last.
    pub fn sample_prompt<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<(usize, Vec<ScoredProgram>)> {
        if self.is_empty() {
            return Err(DiscoveryError::EmptyDatabase);
        }
        let island_id = rng.random_range(0..self.islands.len());
        let programs = &self.islands[island_id].programs;
        if programs.is_empty() {
            // only reachable with a partly seeded database
            let fallback = (0..self.islands.len())
                .find(|&i| !self.islands[i].is_empty())
                .expect("database is not empty");
            return self.sample_from(fallback, k, rng);
        }
        self.sample_from(island_id, k, rng)
    }

    fn sample_from<R: Rng + ?Sized>(&self, island_id: usize, k: usize, rng: &mut R) -> Result<(usize, Vec<ScoredProgram>)> {
        let programs = &self.islands[island_id].programs;
        let mut ranks: Vec<usize> = (0..programs.len()).collect();
        let mut picked = Vec::with_capacity(k.min(programs.len()));
        while picked.len() < k && !ranks.is_empty() {
            let weights: Vec<f64> = ranks.iter().map(|&r| 1.0 / (r + 1) as f64).collect();
            let dist = WeightedIndex::new(&weights).expect("positive weights");
            picked.push(ranks.remove(dist.sample(rng)));
        }
        picked.sort_unstable_by(|a, b| b.cmp(a));
        Ok((island_id, picked.into_iter().map(|r| programs[r].clone()).collect()))
    }

    /// Clears the weaker `floor(I / 2)` islands, ranked by best score (empty
    /// islands rank last, ties by higher index), and seeds each with the best
    /// program of a surviving island chosen uniformly.
    pub fn reset_weaker_half<R: Rng + ?Sized>(&mut self, rng: &mut R) -> ResetEvent {
        let count = self.islands.len();
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| {
            let key = |i: usize| self.best_score(i).unwrap_or(f64::INFINITY);
            key(a).total_cmp(&key(b)).then(a.cmp(&b))
        });
        let keep = count.div_ceil(2);
        let survivors: Vec<usize> = order[..keep].to_vec();
        let mut reset: Vec<usize> = order[keep..].to_vec();
        reset.reverse();

        let mut founders = Vec::with_capacity(reset.len());
        for &island in &reset {
            let founder = survivors[rng.random_range(0..survivors.len())];
            let seed = self.islands[founder].best().map(|p| p.moved_to(island));
            self.islands[island].programs = seed.into_iter().collect();
            founders.push((island, founder));
        }
        ResetEvent { reset, founders }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::PriorityExpr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prog(c: f64, score: f64, island: usize) -> ScoredProgram {
        ScoredProgram::new(PriorityExpr::constant(c), score, island, 0)
    }

    #[test]
    fn single_program_island() {
        let mut db = IslandDatabase::new(1, 10);
        db.register(prog(1.0, 7.0, 0));
        let (island, sample) = db.sample_prompt(2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(island, 0);
        assert_eq!(sample.len(), 1);
        assert_eq!(sample[0].score(), 7.0);
    }

    #[test]
    fn samples_run_worst_to_best() {
        let mut db = IslandDatabase::new(1, 10);
        db.register(prog(1.0, 10.0, 0));
        db.register(prog(2.0, 20.0, 0));
        let (_, sample) = db.sample_prompt(2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let scores: Vec<f64> = sample.iter().map(ScoredProgram::score).collect();
        assert_eq!(scores, vec![20.0, 10.0]);
    }

    #[test]
    fn better_program_is_drawn_first_more_often() {
        let mut db = IslandDatabase::new(1, 10);
        db.register(prog(1.0, 10.0, 0));
        db.register(prog(2.0, 20.0, 0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let wins = (0..10_000)
            .filter(|_| db.sample_prompt(1, &mut rng).unwrap().1[0].score() == 10.0)
            .count();
        // weights 1 and 1/2 give an expected 6667
        assert!(wins > 5_000, "{wins}");
        assert!((6_400..6_950).contains(&wins), "{wins}");
    }

    #[test]
    fn empty_database_cannot_sample() {
        let db = IslandDatabase::new(3, 10);
        assert!(db.sample_prompt(2, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn best_per_island_never_gets_worse() {
        let mut db = IslandDatabase::new(1, 3);
        let mut best = f64::INFINITY;
        for (i, s) in [50.0, 70.0, 40.0, 90.0, 45.0, 30.0, 100.0].into_iter().enumerate() {
            db.register(prog(i as f64, s, 0));
            let now = db.best_score(0).unwrap();
            assert!(now <= best);
            best = now;
        }
        assert_eq!(db.islands()[0].len(), 3);
        let kept: Vec<f64> = db.islands()[0].programs().iter().map(ScoredProgram::score).collect();
        assert_eq!(kept, vec![30.0, 40.0, 45.0]);
    }

    #[test]
    fn duplicate_text_is_not_registered_twice() {
        let mut db = IslandDatabase::new(1, 10);
        assert!(db.register(prog(1.0, 5.0, 0)));
        assert!(!db.register(prog(1.0, 5.0, 0)));
        assert_eq!(db.len(), 1);
    }

    #[test]
    fn two_islands_reset_the_weaker() {
        let mut db = IslandDatabase::new(2, 10);
        db.register(prog(1.0, 5.0, 0));
        db.register(prog(2.0, 9.0, 1));
        db.register(prog(3.0, 12.0, 1));
        let event = db.reset_weaker_half(&mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(event.reset, vec![1]);
        assert_eq!(event.founders, vec![(1, 0)]);
        assert_eq!(db.islands()[1].len(), 1);
        assert_eq!(db.islands()[1].best().unwrap().score(), 5.0);
        assert_eq!(db.islands()[1].best().unwrap().island(), 1);
    }

    #[test]
    fn ten_islands_keep_five_untouched() {
        let mut db = IslandDatabase::new(10, 10);
        for i in 0..10 {
            db.register(prog(i as f64, 100.0 - i as f64, i));
            db.register(prog(50.0 + i as f64, 200.0, i));
        }
        let before = db.clone();
        let best = db.global_best().unwrap().clone();
        let event = db.reset_weaker_half(&mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(event.reset.len(), 5);
        let untouched = (0..10).filter(|&i| db.islands()[i] == before.islands()[i]).count();
        assert_eq!(untouched, 5);
        for &(island, founder) in &event.founders {
            assert!(founder >= 5, "founders come from the stronger half");
            assert_eq!(db.islands()[island].len(), 1);
            assert_eq!(db.islands()[island].best().unwrap().text(), before.islands()[founder].best().unwrap().text());
        }
        assert_eq!(db.global_best().unwrap().text(), best.text());
    }

    #[test]
    fn odd_island_count_keeps_the_larger_half() {
        let mut db = IslandDatabase::new(5, 4);
        for i in 0..5 {
            db.register(prog(i as f64, i as f64, i));
        }
        let event = db.reset_weaker_half(&mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(event.reset, vec![4, 3]);
    }
}
