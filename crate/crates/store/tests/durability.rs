use std::fs::OpenOptions;
use std::io::Write;
use std::sync::Arc;

use arbor_core::{Form, Polarity, RelationRequest, StatementId};
use arbor_store::seed::{smoking_dialog, synthetic_corpus, CorpusParams, SMOKING_ROOT};
use arbor_store::{journal_path, Actor, CorpusFile, Store, StoreConfig, StoreError, TickClock, MAGIC};

fn open(dir: &std::path::Path) -> Store {
    Store::open_with_clock(dir, StoreConfig::default(), Arc::new(TickClock::starting_at(5_000))).unwrap()
}

fn populate(s: &mut Store) {
    let m = s.register("moderator", "correct horse battery").unwrap().id;
    s.set_moderator("moderator", true).unwrap();
    let alice = s.register("alice", "correct horse battery").unwrap().id;
    let root = s.submit_statement(m, "Governments should ban smoking", None).unwrap().id;
    let child = s.submit_statement(alice, "Smoking causes lung cancer", None).unwrap().id;
    s.approve(Actor::User(m), child).unwrap();
    s.set_belief(alice, root, Form::Normal).unwrap();
    s.add_relation(
        m,
        RelationRequest {
            child,
            child_form: Form::Normal,
            parent: root,
            parent_form: Form::Negated,
            polarity: Polarity::Oppose,
        },
    )
    .unwrap();
    s.add_comment(m, root, "Evidence welcome").unwrap();
    let n = s.inbox(alice).unwrap()[0].id;
    s.mark_read(alice, n).unwrap();
}

#[test]
fn reopen_restores_identical_state() {
    let dir = tempfile::tempdir().unwrap();
    let dump = {
        let mut s = open(dir.path());
        populate(&mut s);
        s.canonical_dump()
    };
    let s = open(dir.path());
    assert_eq!(s.canonical_dump(), dump);
    assert!(s.authenticate("alice", "correct horse battery").is_ok());
}

#[test]
fn journal_header() {
    let dir = tempfile::tempdir().unwrap();
    drop(open(dir.path()));
    let bytes = std::fs::read(journal_path(dir.path())).unwrap();
    assert_eq!(&bytes[..8], MAGIC);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
}

#[test]
fn torn_tail_is_discarded() {
    let dir = tempfile::tempdir().unwrap();
    let dump = {
        let mut s = open(dir.path());
        populate(&mut s);
        s.canonical_dump()
    };
    let path = journal_path(dir.path());
    let clean_len = std::fs::metadata(&path).unwrap().len();
    // half a record: a length prefix promising more bytes than follow
    let mut f = OpenOptions::new().append(true).open(&path).unwrap();
    f.write_all(&200u32.to_le_bytes()).unwrap();
    f.write_all(&[0xde, 0xad, 0xbe, 0xef, b'{', b'"']).unwrap();
    drop(f);

    let mut s = open(dir.path());
    assert_eq!(s.canonical_dump(), dump);
    assert_eq!(std::fs::metadata(&path).unwrap().len(), clean_len);
    let m = s.user_by_name("moderator").unwrap().id;
    s.submit_statement(m, "Nicotine is an addictive drug", None).unwrap();
    let after = s.canonical_dump();
    drop(s);
    assert_eq!(open(dir.path()).canonical_dump(), after);
}

#[test]
fn corrupt_checksum_truncates_from_that_record() {
    let dir = tempfile::tempdir().unwrap();
    {
        let mut s = open(dir.path());
        s.register("alice", "correct horse battery").unwrap();
        s.register("bob", "correct horse battery").unwrap();
    }
    let path = journal_path(dir.path());
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 0xff;
    std::fs::write(&path, &bytes).unwrap();
    let s = open(dir.path());
    assert!(s.user_by_name("alice").is_ok());
    assert!(s.user_by_name("bob").is_err());
}

#[test]
fn second_open_is_locked() {
    let dir = tempfile::tempdir().unwrap();
    let _first = open(dir.path());
    let err = Store::open(dir.path(), StoreConfig::default()).unwrap_err();
    assert!(matches!(err, StoreError::Locked(_)), "{err:?}");
}

#[test]
fn missing_directory_is_unavailable() {
    let dir = tempfile::tempdir().unwrap();
    let err = Store::open(&dir.path().join("absent"), StoreConfig::default()).unwrap_err();
    assert!(matches!(err, StoreError::Unavailable(_)), "{err:?}");
}

#[test]
fn foreign_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(journal_path(dir.path()), b"not a store at all").unwrap();
    let err = Store::open(dir.path(), StoreConfig::default()).unwrap_err();
    assert!(matches!(err, StoreError::CorruptLog(_)), "{err:?}");
}

#[test]
fn corpus_round_trip_is_byte_identical() {
    let corpus = synthetic_corpus(CorpusParams::default());
    let text = corpus.to_json();
    let mut s = Store::in_memory(StoreConfig::default());
    let summary = s.import(CorpusFile::from_json(&text).unwrap()).unwrap();
    assert_eq!((summary.statements, summary.edges), (374, 371));
    assert_eq!(s.export_corpus().to_json(), text);
}

#[test]
fn imported_corpus_survives_reopen() {
    let dir = tempfile::tempdir().unwrap();
    let dump = {
        let mut s = open(dir.path());
        s.import(smoking_dialog()).unwrap();
        s.canonical_dump()
    };
    let s = open(dir.path());
    assert_eq!(s.canonical_dump(), dump);
    assert_eq!(s.statement(SMOKING_ROOT).unwrap().text_normal, "Governments should ban smoking");
}

#[test]
fn import_requires_empty_store() {
    let mut s = Store::in_memory(StoreConfig::default());
    s.register("alice", "correct horse battery").unwrap();
    assert!(matches!(s.import(smoking_dialog()), Err(StoreError::NotEmpty)));
}

#[test]
fn edge_to_missing_statement_names_the_id() {
    let mut corpus = smoking_dialog();
    corpus.edges[0].parent = StatementId(9999);
    let mut s = Store::in_memory(StoreConfig::default());
    let err = s.import(corpus).unwrap_err();
    assert!(err.to_string().contains("9999"), "{err}");
    assert!(s.export_corpus().statements.is_empty(), "nothing imported");
}

#[test]
fn rejected_import_leaves_journal_empty() {
    let dir = tempfile::tempdir().unwrap();
    {
        let mut s = open(dir.path());
        let mut corpus = smoking_dialog();
        corpus.statements[1].statement.text_normal = "Is smoking bad?".into();
        assert!(s.import(corpus).is_err());
    }
    assert_eq!(std::fs::metadata(journal_path(dir.path())).unwrap().len(), 12);
}

#[test]
fn schema_version_mismatch_is_rejected() {
    let text = smoking_dialog().to_json().replacen("\"schema_version\": 1", "\"schema_version\": 2", 1);
    let err = CorpusFile::from_json(&text).unwrap_err();
    assert!(err.to_string().contains("schema version 2"), "{err}");
}

#[test]
fn pseudonymized_export_hides_names_and_secrets() {
    let mut s = Store::in_memory(StoreConfig::default());
    populate(&mut s);
    let text = s.export_corpus().pseudonymized().to_json();
    assert!(!text.contains("alice"));
    assert!(!text.contains("sha256$"));
    assert!(text.contains("user-2"));
    // still importable
    Store::in_memory(StoreConfig::default()).import(CorpusFile::from_json(&text).unwrap()).unwrap();
}
