//! Bundled corpora.
//!
//! [`smoking_dialog`] is the small smoking debate used throughout the docs,
//! with "Governments should ban smoking" at id 657. [`synthetic_corpus`]
//! generates a larger community whose aggregate shape is fixed by
//! [`CorpusParams`]: statement and edge totals, how many statements are
//! reused as a child more than once, drafts, users and authorship split.

use std::collections::{BTreeSet, HashSet};

use arbor_core::{
    lint_statement_text, EdgeId, Form, Graph, Polarity, StatementId, Status, Timestamp, UserId,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::CorpusFile;
use crate::state::{Command, State};

/// 2019-03-01T00:00:00Z
const EPOCH: Timestamp = 1_551_398_400_000;
const MINUTE: Timestamp = 60_000;

pub const SMOKING_ROOT: StatementId = StatementId(657);

struct Builder {
    state: State,
    clock: Timestamp,
}

impl Builder {
    fn new(first_statement: StatementId) -> Self {
        let mut state = State::new();
        state.graph = Graph::with_next_ids(first_statement, EdgeId(1));
        Builder { state, clock: EPOCH }
    }

    fn tick(&mut self) -> Timestamp {
        self.clock += MINUTE;
        self.clock
    }

    fn run(&mut self, cmd: Command) -> crate::state::Outcome {
        self.state.apply(&cmd).unwrap_or_else(|e| panic!("seed command {cmd:?} failed: {e}"))
    }

    fn user(&mut self, username: &str, moderator: bool) -> UserId {
        let at = self.tick();
        let id = match self.run(Command::Register { username: username.into(), credential_digest: None, at })
        {
            crate::state::Outcome::User(u) => u.id,
            _ => unreachable!(),
        };
        if moderator {
            self.run(Command::SetModerator { user: id, value: true });
        }
        id
    }

    fn statement(
        &mut self,
        author: UserId,
        text: &str,
        negated: Option<&str>,
        status: Status,
    ) -> StatementId {
        let at = self.tick();
        match self.run(Command::Submit {
            author,
            text_normal: text.into(),
            text_negated_custom: negated.map(str::to_string),
            status,
            at,
        }) {
            crate::state::Outcome::Statement(s) => s.id,
            _ => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn relate(
        &mut self,
        actor: UserId,
        child: StatementId,
        child_form: Form,
        parent: StatementId,
        parent_form: Form,
        polarity: Polarity,
    ) {
        let at = self.tick();
        self.run(Command::Relate { actor, child, child_form, parent, parent_form, polarity, at });
    }

    fn believe(&mut self, user: UserId, statement: StatementId, form: Form) {
        let at = self.tick();
        self.run(Command::SetBelief { user, statement, form, at });
    }

    fn comment(&mut self, user: UserId, statement: StatementId, body: &str) {
        let at = self.tick();
        self.run(Command::Comment { user, statement, body: body.into(), at });
    }
}

/// Eight statements and seven relations around "Governments should ban
/// smoking" (id 657). "Governments should defend freedom of choice of its
/// citizens" opposes it; the relation that places "Banning products creates
/// black markets" is entered from the negated view as a supporting statement.
pub fn smoking_dialog() -> CorpusFile {
    let mut b = Builder::new(SMOKING_ROOT);
    let moderator = b.user("moderator", true);
    let reader = b.user("reader", false);

    let ban = b.statement(
        moderator,
        "Governments should ban smoking",
        Some("Governments should not ban smoking"),
        Status::Approved,
    );
    let freedom = b.statement(
        moderator,
        "Governments should defend freedom of choice of its citizens",
        None,
        Status::Approved,
    );
    let cancer = b.statement(moderator, "Smoking causes lung cancer", None, Status::Approved);
    let secondhand = b.statement(moderator, "Secondhand smoke harms non-smokers", None, Status::Approved);
    let choose = b.statement(moderator, "Smokers freely choose to smoke", None, Status::Approved);
    let nicotine = b.statement(moderator, "Nicotine is an addictive drug", None, Status::Approved);
    let markets = b.statement(moderator, "Banning products creates black markets", None, Status::Approved);
    let prohibition = b.statement(
        moderator,
        "Prohibition of alcohol in the United States increased organized crime",
        None,
        Status::Approved,
    );

    use Form::{Negated, Normal};
    use Polarity::{Oppose, Support};
    b.relate(moderator, freedom, Normal, ban, Normal, Oppose);
    b.relate(moderator, cancer, Normal, ban, Normal, Support);
    b.relate(moderator, secondhand, Normal, ban, Normal, Support);
    b.relate(moderator, choose, Normal, freedom, Normal, Support);
    b.relate(moderator, nicotine, Normal, choose, Normal, Oppose);
    b.relate(moderator, markets, Normal, ban, Negated, Support);
    b.relate(moderator, prohibition, Normal, markets, Normal, Support);

    b.believe(reader, ban, Normal);
    b.believe(reader, nicotine, Normal);
    b.believe(moderator, cancer, Normal);
    b.comment(reader, ban, "Would a ban also cover e-cigarettes?");
    b.state.to_corpus()
}

/// Shape of a generated corpus. The defaults reproduce a six-week community
/// trial: 19 contributing users, 374 statements and 371 relations, 45
/// statements reused as a child more than once, 7 statements still in draft.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub statements: usize,
    pub edges: usize,
    pub reused: usize,
    pub users: usize,
    pub drafts: usize,
    /// Edges whose parent is a relation-statement.
    pub edges_onto_relations: usize,
    /// Statements and edges by the first (moderating) user.
    pub main_author_statements: usize,
    pub main_author_edges: usize,
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            statements: 374,
            edges: 371,
            reused: 45,
            users: 19,
            drafts: 7,
            edges_onto_relations: 11,
            main_author_statements: 246,
            main_author_edges: 286,
            seed: 0x5eed,
        }
    }
}

const ANCHORS: [&str; 6] = [
    "Climate change is man-made",
    "Global warming is man-made",
    "Pineapple does not belong on pizza",
    "Italians don't put pineapple on pizza",
    "Hawaiian pizza is very popular in Australia",
    "Wind turbines are more effective than solar panels in northern Europe",
];

const SUBJECTS: [&str; 30] = [
    "Public transport",
    "Nuclear energy",
    "Remote work",
    "Social media",
    "Carbon taxes",
    "Electric cars",
    "Open source software",
    "Standardized testing",
    "Universal basic income",
    "Rent control",
    "Vaccination programs",
    "Organic farming",
    "Space exploration",
    "Minimum wage increases",
    "Video games",
    "Homework",
    "Daylight saving time",
    "Plastic bag bans",
    "Self-driving cars",
    "Static typing",
    "Code reviews",
    "Pair programming",
    "Microservices",
    "Unit tests",
    "Wind turbines",
    "Solar panels",
    "Meat consumption",
    "Cycling infrastructure",
    "Mass tourism",
    "Public libraries",
];

const MODALS: [&str; 8] = ["can", "could", "should", "will", "may", "might", "would", "must"];

const VERBS: [&str; 12] = [
    "reduce",
    "increase",
    "improve",
    "harm",
    "lower",
    "raise",
    "encourage",
    "discourage",
    "protect",
    "threaten",
    "delay",
    "accelerate",
];

const OBJECTS: [&str; 30] = [
    "household energy costs",
    "public health outcomes",
    "innovation in small companies",
    "trust in public institutions",
    "traffic congestion",
    "carbon emissions",
    "the quality of software",
    "student motivation",
    "long-term productivity",
    "income inequality",
    "rural employment",
    "biodiversity",
    "housing affordability",
    "civic participation",
    "average life expectancy",
    "the number of serious accidents",
    "childhood obesity",
    "the cost of healthcare",
    "critical thinking skills",
    "local economies",
    "air quality in cities",
    "the speed of scientific progress",
    "social cohesion",
    "team communication",
    "maintenance costs",
    "developer onboarding time",
    "water consumption",
    "literacy rates",
    "tax revenue",
    "noise pollution",
];

const SUFFIXES: [&str; 6] = [
    "",
    " in the long run",
    " for low-income families",
    " according to several large studies",
    " in densely populated regions",
    " within a decade",
];

const COMMENTS: [&str; 8] = [
    "Is there a source for the numbers behind the claim?",
    "Which countries does the claim apply to?",
    "Related reading: the annual report of the national statistics office.",
    "The wording could be more precise; consider splitting the claim.",
    "How was the effect measured?",
    "Interesting point, though the effect size seems small.",
    "Does the claim still hold for developing economies?",
    "Thanks, the negated form reads much better now.",
];

fn statement_texts(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut out: Vec<String> = Vec::with_capacity(n);
    for a in ANCHORS.iter().take(n) {
        seen.insert(a.to_string());
        out.push(a.to_string());
    }
    while out.len() < n {
        let mut text = format!(
            "{} {} {} {}{}",
            SUBJECTS.choose(rng).unwrap(),
            MODALS.choose(rng).unwrap(),
            VERBS.choose(rng).unwrap(),
            OBJECTS.choose(rng).unwrap(),
            SUFFIXES.choose(rng).unwrap(),
        );
        if text.chars().count() > 119 {
            text = text.chars().take(119).collect::<String>().trim_end().to_string();
        }
        debug_assert!(lint_statement_text(&text).is_ok());
        if seen.insert(text.clone()) {
            out.push(text);
        }
    }
    out
}

/// Generate a corpus honoring `params` exactly. Deterministic per seed.
///
/// Panics when the parameters are contradictory (more reused statements
/// than candidates, more edges than child slots can hold, ...).
pub fn synthetic_corpus(params: CorpusParams) -> CorpusFile {
    let p = params;
    assert!(p.users >= 2 && p.drafts < p.statements && p.main_author_statements <= p.statements - p.drafts);
    assert!(p.edges_onto_relations <= p.edges - p.edges_onto_relations);
    let approved = p.statements - p.drafts;
    let singles = p.edges.checked_sub(2 * p.reused).expect("edges cover reused slots");
    assert!(p.reused + singles < approved, "not enough approved statements for child slots");

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = Builder::new(StatementId(1));

    let mut users = vec![b.user("moderator", true)];
    for i in 2..=p.users {
        users.push(b.user(&format!("member{i:02}"), false));
    }
    let others = &users[1..];

    // Statements: the main author first, then the others round robin. The
    // trailing drafts belong to other users.
    let texts = statement_texts(&mut rng, p.statements);
    let mut ids = Vec::with_capacity(p.statements);
    for (i, text) in texts.iter().enumerate() {
        let author = if i < p.main_author_statements {
            users[0]
        } else {
            others[(i - p.main_author_statements) % others.len()]
        };
        let status = if i >= approved { Status::Draft } else { Status::Approved };
        ids.push(b.statement(author, text, None, status));
    }

    // Child slots over approved indices >= 1 (index 0 is a root).
    let mut candidates: Vec<usize> = (1..approved).collect();
    candidates.shuffle(&mut rng);
    let reused: Vec<usize> = candidates.iter().copied().filter(|&i| i >= 10).take(p.reused).collect();
    assert_eq!(reused.len(), p.reused);
    let reused_set: BTreeSet<usize> = reused.iter().copied().collect();
    let single: Vec<usize> =
        candidates.iter().copied().filter(|i| !reused_set.contains(i)).take(singles).collect();
    assert_eq!(single.len(), singles);

    // Singles whose parent will be a relation-statement.
    let onto_relation: BTreeSet<usize> = single.iter().copied().take(p.edges_onto_relations).collect();

    let mut plain_slots: Vec<usize> = single.iter().copied().filter(|i| !onto_relation.contains(i)).collect();
    for &r in &reused {
        plain_slots.push(r);
        plain_slots.push(r);
    }
    plain_slots.sort_unstable();

    let mut edge_count = 0usize;
    let actor_for = |k: usize, rng: &mut ChaCha8Rng| {
        if k < p.main_author_edges {
            users[0]
        } else {
            *others.choose(rng).unwrap()
        }
    };
    let mut used_pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut relation_ids = Vec::new();
    for &child in &plain_slots {
        let lo = child.saturating_sub(30);
        let parent = loop {
            let j = rng.random_range(lo..child);
            if used_pairs.insert((child, j)) {
                break j;
            }
            if (lo..child).all(|j| used_pairs.contains(&(child, j))) {
                panic!("no parent left for statement index {child}");
            }
        };
        let child_form = if rng.random_bool(0.1) { Form::Negated } else { Form::Normal };
        let parent_form = if rng.random_bool(0.5) { Form::Negated } else { Form::Normal };
        let polarity = if rng.random_bool(0.6) { Polarity::Support } else { Polarity::Oppose };
        let actor = actor_for(edge_count, &mut rng);
        b.relate(actor, ids[child], child_form, ids[parent], parent_form, polarity);
        edge_count += 1;
        let edge = b.state.graph.edge_between(ids[child], ids[parent]).unwrap();
        relation_ids.push(edge.relation_statement.expect("plain parents are reified"));
    }
    for &child in &onto_relation {
        let parent = *relation_ids.choose(&mut rng).unwrap();
        let polarity = if rng.random_bool(0.5) { Polarity::Support } else { Polarity::Oppose };
        let actor = actor_for(edge_count, &mut rng);
        b.relate(actor, ids[child], Form::Normal, parent, Form::Normal, polarity);
        edge_count += 1;
    }
    debug_assert_eq!(edge_count, p.edges);

    // Beliefs on approved statements and relations, then a few comments.
    let believable: Vec<StatementId> =
        b.state.graph.statements().filter(|s| !s.is_draft()).map(|s| s.id).collect();
    for &u in &users {
        for _ in 0..25 {
            let s = *believable.choose(&mut rng).unwrap();
            let form = if rng.random_bool(0.8) { Form::Normal } else { Form::Negated };
            b.believe(u, s, form);
        }
    }
    for _ in 0..40 {
        let u = *users.choose(&mut rng).unwrap();
        let s = ids[rng.random_range(0..ids.len())];
        b.comment(u, s, COMMENTS.choose(&mut rng).unwrap());
    }
    // Moderation leaves a trace on one draft.
    b.run(Command::Comment {
        user: users[0],
        statement: ids[approved],
        body: "Please phrase the statement so it can stand on its own.".into(),
        at: EPOCH,
    });
    b.state.to_corpus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use arbor_core::StatementKind;
    use std::collections::HashMap;

    #[test]
    fn smoking_dialog_shape() {
        let c = smoking_dialog();
        let s = c.summary();
        assert_eq!((s.statements, s.relation_statements, s.edges), (8, 7, 7));
        let root = c.statements.iter().find(|r| r.statement.id == SMOKING_ROOT).unwrap();
        assert_eq!(root.statement.text_normal, "Governments should ban smoking");
    }

    #[test]
    fn synthetic_corpus_shape() {
        let p = CorpusParams::default();
        let c = synthetic_corpus(p);
        let s = c.summary();
        assert_eq!(s.statements, 374);
        assert_eq!(s.edges, 371);
        assert_eq!(s.users, 19);
        assert_eq!(s.relation_statements, 360);

        let mut uses: HashMap<StatementId, usize> = HashMap::new();
        for e in &c.edges {
            *uses.entry(e.child).or_default() += 1;
        }
        assert_eq!(uses.values().filter(|&&n| n > 1).count(), 45);

        let plain: Vec<_> =
            c.statements.iter().filter(|r| r.statement.kind == StatementKind::Plain).collect();
        assert_eq!(plain.iter().filter(|r| r.statement.is_draft()).count(), 7);
        assert!(plain.iter().all(|r| {
            let n = r.statement.text_normal.chars().count();
            (16..=120).contains(&n)
        }));
        let by_main = plain.iter().filter(|r| r.statement.author == UserId(1)).count();
        assert_eq!(by_main, 246);
        let edges_by_main = c
            .statements
            .iter()
            .filter(|r| r.statement.kind == StatementKind::Relation && r.statement.author == UserId(1))
            .count();
        // relation statements exist only for plain parents; the first 286 edges are all such
        assert_eq!(edges_by_main, 286);
    }

    #[test]
    fn deterministic() {
        assert_eq!(synthetic_corpus(CorpusParams::default()), synthetic_corpus(CorpusParams::default()));
    }
}
