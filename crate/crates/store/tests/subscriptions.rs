//! Random interleavings of belief, relation and comment operations checked
//! against a plain model of who believes what.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use arbor_core::{Form, Polarity, RelationRequest, StatementId, UserId};
use arbor_store::{NotificationEvent, Store, StoreConfig, TickClock};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Believe(usize, usize, bool),
    Unbelieve(usize, usize),
    Relate(usize, usize, usize, bool),
    Comment(usize, usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0..5usize, 0..8usize, any::<bool>()).prop_map(|(u, s, n)| Op::Believe(u, s, n)),
        (0..5usize, 0..8usize).prop_map(|(u, s)| Op::Unbelieve(u, s)),
        (0..5usize, 0..8usize, 0..8usize, any::<bool>()).prop_map(|(u, p, c, o)| Op::Relate(u, p, c, o)),
        (0..5usize, 0..8usize).prop_map(|(u, s)| Op::Comment(u, s)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn notifications_follow_believers(ops in proptest::collection::vec(op(), 1..80)) {
        let mut s = Store::in_memory_with_clock(StoreConfig::default(), Arc::new(TickClock::starting_at(1)));
        let users: Vec<UserId> = (0..5)
            .map(|i| s.register(&format!("user{i}"), "correct horse battery").unwrap().id)
            .collect();
        s.set_moderator("user0", true).unwrap();
        let mut statements: Vec<StatementId> = (0..8)
            .map(|i| s.submit_statement(users[0], &format!("Claim number {i} holds"), None).unwrap().id)
            .collect();

        // model: statement -> (user -> form)
        let mut model: BTreeMap<StatementId, BTreeMap<UserId, Form>> = BTreeMap::new();
        let mut expected: BTreeMap<UserId, usize> = BTreeMap::new();

        for op in ops {
            match op {
                Op::Believe(u, st, negated) => {
                    let form = if negated { Form::Negated } else { Form::Normal };
                    let stmt = statements[st % statements.len()];
                    s.set_belief(users[u], stmt, form).unwrap();
                    model.entry(stmt).or_default().insert(users[u], form);
                }
                Op::Unbelieve(u, st) => {
                    let stmt = statements[st % statements.len()];
                    s.remove_belief(users[u], stmt).unwrap();
                    model.entry(stmt).or_default().remove(&users[u]);
                }
                Op::Relate(u, p, c, oppose) => {
                    let parent = statements[p % statements.len()];
                    let child = statements[c % statements.len()];
                    let polarity = if oppose { Polarity::Oppose } else { Polarity::Support };
                    let req = RelationRequest { child, child_form: Form::Normal, parent, parent_form: Form::Normal, polarity };
                    if let Ok((edge, rel)) = s.add_relation(users[u], req) {
                        for b in model.get(&parent).into_iter().flat_map(|m| m.keys()) {
                            if *b != users[u] {
                                *expected.entry(*b).or_default() += 1;
                            }
                        }
                        let inbox_hit = model.get(&parent).map_or(0, |m| m.keys().filter(|b| **b != users[u]).count());
                        let delivered = users.iter()
                            .flat_map(|x| s.inbox(*x).unwrap())
                            .filter(|n| n.event == NotificationEvent::ChildAdded { edge: edge.id, child })
                            .count();
                        prop_assert_eq!(delivered, inbox_hit);
                        statements.extend(rel.map(|r| r.id));
                    }
                }
                Op::Comment(u, st) => {
                    let stmt = statements[st % statements.len()];
                    s.add_comment(users[u], stmt, "noted").unwrap();
                    for b in model.get(&stmt).into_iter().flat_map(|m| m.keys()) {
                        if *b != users[u] {
                            *expected.entry(*b).or_default() += 1;
                        }
                    }
                }
            }

            for stmt in &statements {
                let held = model.get(stmt).cloned().unwrap_or_default();
                let believers: BTreeSet<UserId> = s.believers(*stmt).into_iter().collect();
                prop_assert_eq!(&believers, &held.keys().copied().collect::<BTreeSet<_>>());
                let counts = s.belief_counts(*stmt);
                prop_assert_eq!(counts.normal as usize, held.values().filter(|f| **f == Form::Normal).count());
                prop_assert_eq!(counts.negated as usize, held.values().filter(|f| **f == Form::Negated).count());
                for (u, f) in &held {
                    prop_assert_eq!(s.belief(*u, *stmt).map(|b| b.form), Some(*f));
                }
            }
        }
        for u in &users {
            prop_assert_eq!(s.inbox(*u).unwrap().len(), expected.get(u).copied().unwrap_or(0));
        }
    }
}
