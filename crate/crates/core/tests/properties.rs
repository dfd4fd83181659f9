use std::collections::BTreeMap;

use comment_lens::category::{map_syntax_features, KindMapping, SYNTAX_FEATURES};
use comment_lens::corpus::{read_records, sample_comments, write_records, CommentRecord, SampleSpec, Snippet};
use comment_lens::eval::{
    cohens_kappa, fleiss_kappa, kl_divergence, precision_recall_f1, smoothed_distribution, AgreementTable,
};
use comment_lens::extent::{merge_extents, tags_from_extents, IobTag};
use comment_lens::nlp::{has_symbol, pos_tag, tokenize};
use comment_lens::syntax::{parse_source, FileId, Language, SourceSpan};
use comment_lens::tree::{
    gain_ratio, Dataset, FeatureKind, FeatureSpec, FeatureValue, FeatureVector, SplitTest, TreeModel, TreeNode,
};
use proptest::prelude::*;

const STATEMENTS: [&str; 6] = [
    "int a = 1;",
    "run();",
    "x = y + 2;",
    "if (a > b) { a = b; }",
    "for (int i = 0; i < n; i++) { sum += i; }",
    "return;",
];

#[derive(Debug, Clone)]
enum Line {
    Stmt(usize),
    Comment(u8, String),
    Trailing(usize, String),
    Block(String),
    Blank,
}

fn line() -> impl Strategy<Value = Line> {
    let word = "[a-z]{1,8}( [a-z]{1,8}){0,3}";
    prop_oneof![
        (0..STATEMENTS.len()).prop_map(Line::Stmt),
        (0u8..3, word).prop_map(|(i, w)| Line::Comment(i, w)),
        (0..STATEMENTS.len(), word).prop_map(|(s, w)| Line::Trailing(s, w)),
        word.prop_map(Line::Block),
        Just(Line::Blank),
    ]
}

fn java_source(lines: &[Line]) -> String {
    let mut src = String::from("class A {\n  void f() {\n");
    for l in lines {
        match l {
            Line::Stmt(s) => src += &format!("    {}\n", STATEMENTS[*s]),
            Line::Comment(indent, w) => src += &format!("{}// {w}\n", "  ".repeat(*indent as usize + 1)),
            Line::Trailing(s, w) => src += &format!("    {} // {w}\n", STATEMENTS[*s]),
            Line::Block(w) => src += &format!("    /* {w} */\n"),
            Line::Blank => src += "\n",
        }
    }
    src + "  }\n}\n"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighbors_bracket_every_comment(lines in prop::collection::vec(line(), 0..12)) {
        let src = java_source(&lines);
        let file = parse_source(&src, Language::Java, FileId(0)).unwrap();
        let again = parse_source(&src, Language::Java, FileId(0)).unwrap();
        prop_assert_eq!(file.nodes(), again.nodes());
        prop_assert_eq!(&file.comments, &again.comments);
        for c in &file.comments {
            prop_assert_eq!(file.slice(&c.span), c.raw_text.as_str());
            let n = file.neighbors(&c.span);
            prop_assert!(n.parent.span.contains(&c.span));
            if let Some(l) = n.left {
                prop_assert!(l.span.end_offset <= c.span.start_offset);
            }
            if let Some(r) = n.right {
                prop_assert!(c.span.end_offset <= r.span.start_offset);
            }
            prop_assert!(c.span.start_offset < c.span.end_offset);
        }
    }

    #[test]
    fn merge_is_a_partition_and_round_trips(
        lines in prop::collection::vec(line(), 1..12),
        bits in prop::collection::vec(any::<bool>(), 40),
    ) {
        let file = parse_source(&java_source(&lines), Language::Java, FileId(0)).unwrap();
        let n = file.comments.len();
        let tags: Vec<IobTag> = (0..n)
            .map(|i| if i == 0 || bits[i % bits.len()] { IobTag::B } else { IobTag::I })
            .collect();
        let extents = merge_extents(&file, &tags);
        let flat: Vec<_> = extents.iter().flat_map(|e| e.tokens.iter().cloned()).collect();
        prop_assert_eq!(&flat, &file.comments);
        let mut next = 0;
        for e in &extents {
            prop_assert_eq!(e.first_token, next);
            next += e.tokens.len();
        }
        let spans: Vec<SourceSpan> = extents.iter().map(|e| e.span).collect();
        prop_assert_eq!(tags_from_extents(&file, &spans), tags);
    }

    #[test]
    fn tagger_is_total(text in "[A-Za-z ,.()_=]{0,60}") {
        let tokens = tokenize(&text);
        let tagged = pos_tag(&tokens);
        prop_assert_eq!(tagged.tokens.len(), tokens.len());
        prop_assert!(tagged.tokens.iter().all(|t| !t.pos.as_str().is_empty()));
    }

    #[test]
    fn has_symbol_ignores_outer_whitespace(text in "[a-z(){};=_ ]{0,30}", pre in "[ \t\n]{0,4}", post in "[ \t\n]{0,4}") {
        prop_assert_eq!(has_symbol(&text), has_symbol(&format!("{pre}{text}{post}")));
    }
}

fn binary_dataset(rows: &[([bool; 3], u8)]) -> Dataset {
    let specs = (0..3).map(|i| FeatureSpec::new(format!("f{i}"), FeatureKind::Boolean)).collect();
    let mut ds = Dataset::new(specs, vec!["a".into(), "b".into(), "c".into()]).unwrap();
    for (bits, label) in rows {
        let fv = bits
            .iter()
            .enumerate()
            .fold(FeatureVector::new(), |fv, (i, b)| fv.with(format!("f{i}"), *b));
        ds.push(fv, ["a", "b", "c"][*label as usize]).unwrap();
    }
    ds
}

fn rows() -> impl Strategy<Value = Vec<([bool; 3], u8)>> {
    prop::collection::vec((any::<[bool; 3]>(), 0u8..3), 1..16)
}

fn all_vectors() -> Vec<FeatureVector> {
    (0..27u32)
        .map(|code| {
            // each feature true, false or missing
            (0..3).fold(FeatureVector::new(), |fv, i| match (code / 3u32.pow(i)) % 3 {
                0 => fv.with(format!("f{i}"), false),
                1 => fv.with(format!("f{i}"), true),
                _ => fv,
            })
        })
        .collect()
}

fn check_leaves(node: &TreeNode) -> bool {
    match node {
        TreeNode::Leaf {
            support, distribution, ..
        } => distribution.values().sum::<usize>() == *support,
        TreeNode::Split { children, .. } => children.iter().all(check_leaves),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rules_agree_with_tree(rows in rows(), min in 1usize..4) {
        let ds = binary_dataset(&rows);
        let model = TreeModel::train("t", &ds, min).unwrap();
        let rules = model.to_rules();
        for fv in all_vectors() {
            let matching = rules.rules.iter().filter(|r| r.matches(&fv)).count();
            prop_assert_eq!(matching, 1);
            let (label, _) = rules.classify(&fv).unwrap();
            prop_assert_eq!(label, model.classify(&fv).0);
        }
    }

    #[test]
    fn training_is_deterministic_and_consistent(rows in rows(), min in 1usize..4) {
        let ds = binary_dataset(&rows);
        let a = TreeModel::train("t", &ds, min).unwrap();
        let b = TreeModel::train("t", &ds, min).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(check_leaves(&a.tree));
        if let TreeNode::Split { feature, test, .. } = &a.tree {
            let chosen = gain_ratio(&ds, feature, test).unwrap();
            for i in 0..3 {
                if let Ok(r) = gain_ratio(&ds, &format!("f{i}"), &SplitTest::Boolean) {
                    prop_assert!(r <= chosen + 1e-12);
                }
            }
        }
    }

    #[test]
    fn injective_labels_are_fit(bits in prop::collection::btree_set(any::<[bool; 3]>(), 1..8)) {
        let rows: Vec<([bool; 3], u8)> = bits.iter().map(|b| (*b, (b[0] as u8 + b[1] as u8 * 2) % 3)).collect();
        let ds = binary_dataset(&rows);
        let model = TreeModel::train("t", &ds, 1).unwrap();
        for ex in ds.examples() {
            prop_assert_eq!(model.classify(&ex.features).0, ex.label.as_str());
        }
    }
}

const JAVA_KINDS: [&str; 6] = [
    "SimpleName",
    "MethodDeclaration",
    "IfStatement",
    "ForStatement",
    "Block",
    "ExpressionStatement",
];

fn syntax_model(rows: &[(usize, usize, bool, u8)]) -> TreeModel {
    let specs = vec![
        FeatureSpec::new(SYNTAX_FEATURES[0], FeatureKind::Categorical),
        FeatureSpec::new(SYNTAX_FEATURES[2], FeatureKind::Categorical),
        FeatureSpec::new("HasSymbol", FeatureKind::Boolean),
    ];
    let mut ds = Dataset::new(specs, vec!["a".into(), "b".into()]).unwrap();
    for (l, p, s, y) in rows {
        let fv = FeatureVector::new()
            .with(SYNTAX_FEATURES[0], JAVA_KINDS[*l])
            .with(SYNTAX_FEATURES[2], JAVA_KINDS[*p])
            .with("HasSymbol", *s);
        ds.push(fv, ["a", "b"][*y as usize]).unwrap();
    }
    TreeModel::train("category", &ds, 1).unwrap()
}

fn shape(node: &TreeNode, out: &mut Vec<String>) {
    match node {
        TreeNode::Leaf { label, .. } => out.push(format!("leaf {label}")),
        TreeNode::Split {
            feature, test, children, ..
        } => {
            match test {
                SplitTest::Categorical { values } => out.push(format!("{feature} /{}", values.len())),
                other => out.push(format!("{feature} {other:?}")),
            }
            children.iter().for_each(|c| shape(c, out));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mapping_preserves_shape(rows in prop::collection::vec((0usize..6, 0usize..6, any::<bool>(), 0u8..2), 1..20)) {
        let model = syntax_model(&rows);
        let mapped = map_syntax_features(&model, &KindMapping::java_to_python()).unwrap();
        prop_assert_eq!(mapped.tree.node_count(), model.tree.node_count());
        prop_assert_eq!(mapped.tree.depth(), model.tree.depth());
        let (mut a, mut b) = (Vec::new(), Vec::new());
        shape(&model.tree, &mut a);
        shape(&mapped.tree, &mut b);
        prop_assert_eq!(a, b);
        let inverse: String = KindMapping::java_to_python()
            .pairs()
            .map(|(j, p)| format!("{p}\t{j}\n"))
            .collect();
        let back = map_syntax_features(&mapped, &KindMapping::parse(&inverse).unwrap()).unwrap();
        prop_assert_eq!(back, model);
    }
}

fn relabel<T: Clone>(row: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&j| row[j].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prf_bounds(tp in 0u64..50, extra_p in 0u64..50, extra_a in 0u64..50) {
        let (p, r, f) = precision_recall_f1(tp, tp + extra_p, tp + extra_a);
        for v in [p, r, f] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(f <= p.max(r) + 1e-12);
        if extra_p == extra_a {
            prop_assert!((p - r).abs() < 1e-12 && (f - p).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_relabel_invariant(
        items in prop::collection::vec(prop::collection::vec(0u64..4, 3), 2..15),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        // each row: counts of three raters' votes spread over three categories
        let rows: Vec<Vec<u64>> = items
            .iter()
            .map(|v| {
                let mut row = vec![0u64; 3];
                for &c in v {
                    row[(c % 3) as usize] += 1;
                }
                row
            })
            .collect();
        let table = AgreementTable::new(rows.clone()).unwrap();
        let permuted = AgreementTable::new(rows.iter().map(|r| relabel(r, &perm)).collect()).unwrap();
        match (fleiss_kappa(&table), fleiss_kappa(&permuted)) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a - b).abs() < 1e-9);
                prop_assert!(a <= 1.0 + 1e-12);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
        let pairs: Vec<(usize, usize)> = items.iter().map(|v| (v[0] as usize % 3, v[1] as usize % 3)).collect();
        let moved: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        match (cohens_kappa(&pairs), cohens_kappa(&moved)) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a - b).abs() < 1e-9);
                let agree = pairs.iter().all(|(a, b)| a == b);
                prop_assert_eq!((a - 1.0).abs() < 1e-12, agree);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn two_rater_fleiss_matches_cohen_on_symmetric_pairs(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..20)) {
        let sym: Vec<(usize, usize)> = pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        let ratings: Vec<Vec<usize>> = sym.iter().map(|&(a, b)| vec![a, b]).collect();
        let fleiss = fleiss_kappa(&AgreementTable::from_ratings(&ratings).unwrap());
        let cohen = cohens_kappa(&sym);
        match (fleiss, cohen) {
            (Ok(f), Ok(c)) => prop_assert!((f - c).abs() < 1e-9, "{f} vs {c}"),
            (f, c) => prop_assert_eq!(f.is_err(), c.is_err()),
        }
    }

    #[test]
    fn kl_nonnegative_and_zero_on_equal(
        p in prop::collection::vec(0u32..20, 11),
        q in prop::collection::vec(0u32..20, 11),
    ) {
        let p: Vec<f64> = p.into_iter().map(f64::from).collect();
        let q: Vec<f64> = q.into_iter().map(f64::from).collect();
        let ps = smoothed_distribution(&p, 0.5).unwrap();
        let qs = smoothed_distribution(&q, 0.5).unwrap();
        let d = kl_divergence(&ps, &qs).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(kl_divergence(&ps, &ps).unwrap().abs() < 1e-12);
        if d < 1e-15 {
            prop_assert!(ps.iter().zip(&qs).all(|(a, b)| (a - b).abs() < 1e-6));
        }
    }
}

fn record(file: usize, line: usize) -> CommentRecord {
    let path = format!("F{file}.java");
    CommentRecord {
        id: format!("p:{path}:{line}:0"),
        project: "p".into(),
        path,
        language: Language::Java,
        span: SourceSpan {
            start_offset: line * 20,
            end_offset: line * 20 + 5,
            start_line: line,
            end_line: line,
            start_col: 0,
            end_col: 5,
        },
        text: format!("comment {line}"),
        target: None,
        target_span: None,
        category: None,
        annotator: None,
        elapsed_ms: None,
        snippet: Snippet {
            first_line: line,
            lines: vec![format!("// comment {line}")],
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sample_respects_cap_and_seed(
        files in prop::collection::vec(1usize..8, 1..10),
        size in 0usize..40,
        cap in 1usize..4,
        seed in any::<u64>(),
    ) {
        let records: Vec<CommentRecord> = files
            .iter()
            .enumerate()
            .flat_map(|(f, &n)| (1..=n).map(move |l| record(f, l)))
            .collect();
        let spec = SampleSpec { size, per_file_cap: cap, seed };
        let a = sample_comments(&records, spec).unwrap();
        let b = sample_comments(&records, spec).unwrap();
        prop_assert_eq!(&a, &b);
        let mut per_file: BTreeMap<&str, usize> = BTreeMap::new();
        for r in &a.records {
            *per_file.entry(&r.path).or_default() += 1;
        }
        prop_assert!(per_file.values().all(|&n| n <= cap));
        let available: usize = files.iter().map(|&n| n.min(cap)).sum();
        prop_assert_eq!(a.records.len(), size.min(available));
    }

    #[test]
    fn store_round_trip(files in prop::collection::vec(1usize..4, 0..5)) {
        let records: Vec<CommentRecord> = files
            .iter()
            .enumerate()
            .flat_map(|(f, &n)| (1..=n).map(move |l| record(f, l)))
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        write_records(&path, &records).unwrap();
        prop_assert_eq!(read_records(&path).unwrap(), records);
    }
}

#[test]
fn categorical_values_survive_serialization() {
    let v = FeatureValue::from("Block");
    let text = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<FeatureValue>(&text).unwrap(), v);
}
