use std::collections::{BTreeSet, HashSet};

use arbor_core::{
    lint_statement_text, slugify, EdgeId, Form, Graph, GraphError, NoAnnotations, Polarity, RelationRequest,
    StatementId, StatementKind, Status, UserId,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Create { draft: bool },
    Relate { child: usize, parent: usize, child_form: bool, parent_form: bool, support: bool },
    Demote(usize),
    Approve(usize),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        2 => any::<bool>().prop_map(|draft| Op::Create { draft }),
        6 => (any::<usize>(), any::<usize>(), any::<bool>(), any::<bool>(), any::<bool>()).prop_map(
            |(child, parent, child_form, parent_form, support)| Op::Relate {
                child, parent, child_form, parent_form, support
            }
        ),
        1 => any::<usize>().prop_map(Op::Demote),
        1 => any::<usize>().prop_map(Op::Approve),
    ]
}

fn form(negated: bool) -> Form {
    if negated {
        Form::Negated
    } else {
        Form::Normal
    }
}

fn apply(g: &mut Graph, ops: &[Op]) {
    for (i, op) in ops.iter().enumerate() {
        let ids: Vec<StatementId> = g.statements().map(|s| s.id).collect();
        match *op {
            Op::Create { draft } => {
                let status = if draft { Status::Draft } else { Status::Approved };
                g.create_statement(UserId(1), &format!("Statement number {i}"), None, status, i as u64)
                    .unwrap();
            }
            Op::Relate { child, parent, child_form, parent_form, support } if !ids.is_empty() => {
                let req = RelationRequest {
                    child: ids[child % ids.len()],
                    child_form: form(child_form),
                    parent: ids[parent % ids.len()],
                    parent_form: form(parent_form),
                    polarity: if support { Polarity::Support } else { Polarity::Oppose },
                };
                let _ = g.add_relation(req, UserId(2), i as u64);
            }
            Op::Demote(k) if !ids.is_empty() => {
                g.set_status(ids[k % ids.len()], Status::Draft).unwrap();
            }
            Op::Approve(k) if !ids.is_empty() => {
                g.set_status(ids[k % ids.len()], Status::Approved).unwrap();
            }
            _ => {}
        }
    }
}

fn edge_set(entries: &[arbor_core::ViewEntry]) -> BTreeSet<EdgeId> {
    entries.iter().map(|e| e.edge).collect()
}

fn check_invariants(g: &Graph) {
    let mut pairs = HashSet::new();
    for e in g.edges() {
        assert!(pairs.insert((e.child, e.parent)), "duplicate pair {e:?}");
        assert_ne!(e.child, e.parent);
        let parent = g.statement(e.parent).unwrap();
        match parent.kind {
            StatementKind::Plain => {
                let rel = g.statement(e.relation_statement.expect("plain parent reifies")).unwrap();
                assert_eq!(rel.kind, StatementKind::Relation);
                let payload = rel.relation.unwrap();
                assert_eq!(
                    (payload.child, payload.parent, payload.polarity),
                    (e.child, e.parent, e.polarity)
                );
            }
            StatementKind::Relation => assert!(e.relation_statement.is_none()),
        }
        assert!(g.used_in(e.child).any(|u| u.id == e.id));
    }
    for s in g.statements() {
        if s.is_draft() {
            continue;
        }
        let normal = g.view(s.id, Form::Normal, &NoAnnotations).unwrap();
        let negated = g.view(s.id, Form::Negated, &NoAnnotations).unwrap();
        assert_eq!(edge_set(&negated.supporting), edge_set(&normal.opposing));
        assert_eq!(edge_set(&negated.opposing), edge_set(&normal.supporting));

        let shown: Vec<EdgeId> = normal.supporting.iter().chain(&normal.opposing).map(|e| e.edge).collect();
        let unique: BTreeSet<_> = shown.iter().copied().collect();
        assert_eq!(shown.len(), unique.len(), "view duplicates an edge");
        let expected: BTreeSet<_> = g.children_of(s.id).map(|e| e.id).collect();
        assert_eq!(unique, expected, "view omits an edge");

        let used: Vec<_> = normal.used_in.iter().map(|u| u.edge).collect();
        let expected: Vec<_> = {
            let mut v: Vec<_> = g.edges().filter(|e| e.child == s.id).map(|e| e.id).collect();
            v.sort();
            v
        };
        assert_eq!(used, expected);
    }
    for s in g.statements().filter(|s| !s.overlong_exempt) {
        let report = lint_statement_text(&s.text_normal);
        assert!(report.is_ok(), "stored text fails lint: {:?}", s.text_normal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_invariants_hold(ops in prop::collection::vec(op(), 1..300)) {
        let mut g = Graph::new();
        apply(&mut g, &ops);
        check_invariants(&g);
    }

    #[test]
    fn view_is_pure(ops in prop::collection::vec(op(), 1..100)) {
        let mut g = Graph::new();
        apply(&mut g, &ops);
        for s in g.statements() {
            for f in Form::ALL {
                let a = g.view(s.id, f, &NoAnnotations).unwrap();
                let b = g.view(s.id, f.negate().negate(), &NoAnnotations).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn slug_is_idempotent(text in "\\PC{0,240}") {
        let once = slugify(&text);
        prop_assert_eq!(slugify(&once), once.clone());
        prop_assert!(once.len() <= 80);
        prop_assert!(!once.starts_with('-') && !once.ends_with('-'));
        prop_assert!(!once.contains("--"));
    }

    #[test]
    fn slug_matches_char_oracle(words in prop::collection::vec("[a-zA-Z0-9]{1,12}", 1..30), seps in prop::collection::vec("[ ,.!?_-]{1,3}", 30)) {
        let mut text = String::new();
        for (i, w) in words.iter().enumerate() {
            text.push_str(w);
            text.push_str(&seps[i]);
        }
        prop_assert_eq!(slugify(&text), slug_oracle(&text));
    }
}

/// Character-by-character reference: build lowercase tokens, join with
/// hyphens while the next token still fits in 80 characters.
fn slug_oracle(text: &str) -> String {
    let mut tokens: Vec<String> = vec![String::new()];
    for c in text.chars() {
        if c.is_ascii_alphanumeric() {
            tokens.last_mut().unwrap().push(c.to_ascii_lowercase());
        } else if !tokens.last().unwrap().is_empty() {
            tokens.push(String::new());
        }
    }
    tokens.retain(|t| !t.is_empty());
    let mut out = String::new();
    for t in tokens {
        let needed = if out.is_empty() { t.len() } else { out.len() + 1 + t.len() };
        if needed > 80 {
            if out.is_empty() {
                out = t[..80].to_string();
            }
            break;
        }
        if !out.is_empty() {
            out.push('-');
        }
        out.push_str(&t);
    }
    out
}

#[test]
fn slug_of_200_chars() {
    let source = "Governments should ban smoking in all public places including parks beaches \
                  stadiums and outdoor cafes because secondhand smoke harms everyone nearby \
                  especially children and elderly people who cannot choose to walk away from it";
    let text: String = source.chars().take(200).collect();
    assert_eq!(text.chars().count(), 200);
    let slug = slugify(&text);
    assert_eq!(slug, slug_oracle(&text));
    assert!(slug.len() <= 80 && !slug.ends_with('-'));
}

/// Sign algebra: a (form, polarity) claim about the parent maps to
/// +1/-1 by multiplying signs. Normal and Support are +1.
fn sign_oracle(parent_form: Form, polarity: Polarity) -> Polarity {
    let f = if parent_form == Form::Normal { 1 } else { -1 };
    let p = if polarity == Polarity::Support { 1 } else { -1 };
    if f * p == 1 {
        Polarity::Support
    } else {
        Polarity::Oppose
    }
}

#[test]
fn canonical_collapse_matches_oracle() {
    let mut distinct = BTreeSet::new();
    for child_form in Form::ALL {
        for parent_form in Form::ALL {
            for polarity in Polarity::ALL {
                let mut g = Graph::new();
                let parent = g
                    .create_statement(UserId(1), "Governments should ban smoking", None, Status::Approved, 0)
                    .unwrap()
                    .id;
                let child = g
                    .create_statement(UserId(1), "Smoking causes lung cancer", None, Status::Approved, 0)
                    .unwrap()
                    .id;
                let (edge, _) = g
                    .add_relation(
                        RelationRequest { child, child_form, parent, parent_form, polarity },
                        UserId(1),
                        0,
                    )
                    .unwrap();
                assert_eq!(edge.polarity, sign_oracle(parent_form, polarity));
                assert_eq!(edge.child_form, child_form);
                if child_form == Form::Normal {
                    distinct.insert((edge.child, edge.child_form, edge.parent, edge.polarity));
                }
            }
        }
    }
    assert_eq!(distinct.len(), 2);
}

#[test]
fn second_variant_on_same_pair_is_duplicate() {
    let mut g = Graph::new();
    let parent = g
        .create_statement(UserId(1), "Governments should ban smoking", None, Status::Approved, 0)
        .unwrap()
        .id;
    let child =
        g.create_statement(UserId(1), "Smoking causes lung cancer", None, Status::Approved, 0).unwrap().id;
    let mut created = 0;
    for parent_form in Form::ALL {
        for polarity in Polarity::ALL {
            let req = RelationRequest { child, child_form: Form::Normal, parent, parent_form, polarity };
            match g.add_relation(req, UserId(1), 0) {
                Ok(_) => created += 1,
                Err(GraphError::DuplicateRelation { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert_eq!(created, 1);
    assert_eq!(g.edge_count(), 1);
}

#[test]
fn search_full_text_ranks_first() {
    let texts = [
        "Governments should ban smoking",
        "Smoking causes lung cancer",
        "Nicotine is an addictive drug",
        "Secondhand smoke harms non-smokers",
        "Governments should defend freedom of choice of its citizens",
        "Banning products creates black markets",
    ];
    let mut g = Graph::new();
    for (i, t) in texts.iter().enumerate() {
        g.create_statement(UserId(1), t, None, Status::Approved, i as u64).unwrap();
    }
    for t in texts {
        let hits = g.search(t, 3).unwrap();
        assert_eq!(hits[0].statement.text_normal, t);
        assert_eq!(hits[0].score, 1.0);
        // recompute every score independently
        for hit in g.search(t, usize::MAX).unwrap() {
            let q: BTreeSet<String> = words(t);
            let n = words(&hit.statement.text_normal);
            let neg = words(&hit.statement.negated_text());
            let matched = q.iter().filter(|w| n.contains(*w) || neg.contains(*w)).count();
            assert_eq!(hit.score, matched as f64 / q.len() as f64);
        }
    }
}

fn words(t: &str) -> BTreeSet<String> {
    t.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}
