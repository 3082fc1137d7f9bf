//! Identity dimensions, matcher vocabularies, and the tagger that turns
//! free-text category strings into per-dimension tag matrices.
//!
//! A matcher term hits a category string when it occurs as a case-insensitive
//! substring, except that an occurrence strictly contained inside a longer
//! occurrence of a different category's term in the same dimension is
//! suppressed. Plain substring matching keeps hyphenated and inflected forms
//! ("African-American male actors", "American Christians") working with
//! single-word terms, while the containment rule disarms the term-in-term
//! collisions the stock vocabulary would otherwise trip over: "asian" occurs
//! inside "caucasian" and "male" inside "female".

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::FollowGraph;

/// The five identity dimensions, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityDimension {
    Race,
    Gender,
    Lgbtq,
    Religion,
    Politics,
}

/// Which salience metric a dimension uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// Negative followee-tag entropy (race, gender).
    Entropy,
    /// Fraction of followees carrying any tag (the rest).
    Coverage,
}

impl IdentityDimension {
    pub const ALL: [IdentityDimension; 5] = [
        IdentityDimension::Race,
        IdentityDimension::Gender,
        IdentityDimension::Lgbtq,
        IdentityDimension::Religion,
        IdentityDimension::Politics,
    ];

    pub fn metric_kind(self) -> MetricKind {
        match self {
            IdentityDimension::Race | IdentityDimension::Gender => MetricKind::Entropy,
            _ => MetricKind::Coverage,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IdentityDimension::Race => "race",
            IdentityDimension::Gender => "gender",
            IdentityDimension::Lgbtq => "lgbtq",
            IdentityDimension::Religion => "religion",
            IdentityDimension::Politics => "politics",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityDimension> {
        match s {
            "race" => Some(IdentityDimension::Race),
            "gender" => Some(IdentityDimension::Gender),
            "lgbtq" => Some(IdentityDimension::Lgbtq),
            "religion" => Some(IdentityDimension::Religion),
            "politics" => Some(IdentityDimension::Politics),
            _ => None,
        }
    }

    /// Position within [`Self::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl core::fmt::Display for IdentityDimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("unknown user {id:?} in categories input")]
    UnknownUser { id: String },
    #[error("user {id:?} has audience role but appears in categories input")]
    AudienceUserTagged { id: String },
    #[error("duplicate category {name:?} in dimension {dimension}")]
    DuplicateCategory {
        dimension: IdentityDimension,
        name: String,
    },
    #[error("empty matcher term for category {name:?} in dimension {dimension}")]
    EmptyTerm {
        dimension: IdentityDimension,
        name: String,
    },
}

/// One category of a dimension: display name plus lower-cased matcher terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDef {
    pub name: String,
    pub terms: Vec<String>,
}

/// Per-dimension category/term table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    dimensions: BTreeMap<IdentityDimension, Vec<CategoryDef>>,
}

impl Vocabulary {
    pub fn empty() -> Vocabulary {
        Vocabulary {
            dimensions: BTreeMap::new(),
        }
    }

    /// The stock vocabulary; matcher terms default to the category names.
    pub fn builtin() -> Vocabulary {
        let mut vocab = Vocabulary::empty();
        let table: [(IdentityDimension, &[&str]); 5] = [
            (
                IdentityDimension::Race,
                &[
                    "Caucasian",
                    "African-American",
                    "Asian",
                    "Hispanic/Latino",
                    "Native American/Hawaiian",
                ],
            ),
            (IdentityDimension::Gender, &["Male", "Female", "Non-Binary"]),
            (
                IdentityDimension::Lgbtq,
                &[
                    "LGBT",
                    "Gay",
                    "Bisexual",
                    "Lesbian",
                    "Transgender",
                    "Queer",
                    "Pansexual",
                    "Asexual",
                ],
            ),
            (
                IdentityDimension::Religion,
                &[
                    "Jewish",
                    "Christian",
                    "Catholic",
                    "Muslim",
                    "Buddhist",
                    "Hindu",
                    "Atheist",
                    "Sikh",
                    "Spiritual",
                ],
            ),
            (
                IdentityDimension::Politics,
                &["Democrat", "Republican", "Libertarian", "Independent"],
            ),
        ];
        for (dimension, names) in table {
            for name in names {
                vocab
                    .add_category(dimension, name, &[name])
                    .expect("builtin vocabulary is well-formed");
            }
        }
        vocab
    }

    pub fn add_category(
        &mut self,
        dimension: IdentityDimension,
        name: &str,
        terms: &[&str],
    ) -> Result<(), TagError> {
        let entry = self.dimensions.entry(dimension).or_default();
        if entry.iter().any(|c| c.name == name) {
            return Err(TagError::DuplicateCategory {
                dimension,
                name: name.to_string(),
            });
        }
        let mut lowered = Vec::with_capacity(terms.len().max(1));
        for term in terms {
            let term = term.to_lowercase();
            if term.is_empty() {
                return Err(TagError::EmptyTerm {
                    dimension,
                    name: name.to_string(),
                });
            }
            lowered.push(term);
        }
        if lowered.is_empty() {
            lowered.push(name.to_lowercase());
        }
        entry.push(CategoryDef {
            name: name.to_string(),
            terms: lowered,
        });
        Ok(())
    }

    pub fn categories(&self, dimension: IdentityDimension) -> &[CategoryDef] {
        self.dimensions.get(&dimension).map_or(&[], Vec::as_slice)
    }
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::builtin()
    }
}

/// Binary influencer-by-category membership for one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TagMatrix {
    pub dimension: IdentityDimension,
    categories: Vec<String>,
    memberships: Vec<Vec<u16>>,
}

impl TagMatrix {
    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn category_index(&self, name: &str) -> Option<u16> {
        self.categories.iter().position(|c| c == name).map(|i| i as u16)
    }

    /// Sorted category indices of influencer `i`.
    pub fn memberships(&self, influencer: usize) -> &[u16] {
        &self.memberships[influencer]
    }

    pub fn is_tagged(&self, influencer: usize) -> bool {
        !self.memberships[influencer].is_empty()
    }

    pub fn has_category(&self, influencer: usize, category: u16) -> bool {
        self.memberships[influencer].binary_search(&category).is_ok()
    }

    pub fn influencer_count(&self) -> usize {
        self.memberships.len()
    }

    /// Direct constructor for generators and tests; membership lists are
    /// sorted and deduplicated.
    pub fn from_memberships(
        dimension: IdentityDimension,
        categories: Vec<String>,
        mut memberships: Vec<Vec<u16>>,
    ) -> TagMatrix {
        for row in &mut memberships {
            row.sort_unstable();
            row.dedup();
            debug_assert!(row.iter().all(|&c| (c as usize) < categories.len()));
        }
        TagMatrix {
            dimension,
            categories,
            memberships,
        }
    }
}

/// Tag matrices for every dimension the vocabulary defines.
pub type TagSet = BTreeMap<IdentityDimension, TagMatrix>;

/// Byte offsets of every (possibly overlapping) occurrence of `term` in `s`.
fn occurrences(s: &str, term: &str) -> impl Iterator<Item = (usize, usize)> {
    let s_bytes = s.as_bytes().to_vec();
    let t_bytes = term.as_bytes().to_vec();
    let t_len = t_bytes.len();
    let end = s_bytes.len().saturating_sub(t_len.saturating_sub(1));
    (0..end).filter_map(move |i| {
        if t_len > 0 && s_bytes[i..i + t_len] == t_bytes[..] {
            Some((i, i + t_len))
        } else {
            None
        }
    })
}

/// Category indices matched by one lower-cased string against one dimension.
fn match_dimension(lowered: &str, categories: &[CategoryDef]) -> Vec<u16> {
    // Collect every occurrence span per category first.
    let mut spans: Vec<(usize, usize, u16)> = Vec::new();
    for (c, category) in categories.iter().enumerate() {
        for term in &category.terms {
            for (start, end) in occurrences(lowered, term) {
                spans.push((start, end, c as u16));
            }
        }
    }
    let mut matched = Vec::new();
    for &(start, end, cat) in &spans {
        let contained = spans.iter().any(|&(s2, e2, c2)| {
            c2 != cat && s2 <= start && end <= e2 && (e2 - s2) > (end - start)
        });
        if !contained && !matched.contains(&cat) {
            matched.push(cat);
        }
    }
    matched.sort_unstable();
    matched
}

/// Assigns per-dimension category memberships to influencers by intersecting
/// their category strings with the vocabulary. Influencers without any match
/// in a dimension keep an empty membership there.
pub fn tag_influencers(
    graph: &FollowGraph,
    vocabulary: &Vocabulary,
    pairs: &[(String, String)],
) -> Result<TagSet, TagError> {
    let m = graph.influencer_count();
    let mut strings: Vec<Vec<&str>> = alloc::vec![Vec::new(); m];
    for (id, category_string) in pairs {
        let index = graph.index_of(id).ok_or_else(|| TagError::UnknownUser {
            id: id.clone(),
        })?;
        if !graph.is_influencer(index) {
            return Err(TagError::AudienceUserTagged { id: id.clone() });
        }
        strings[index].push(category_string);
    }

    let mut tags = TagSet::new();
    for dimension in IdentityDimension::ALL {
        let categories = vocabulary.categories(dimension);
        let mut memberships: Vec<Vec<u16>> = alloc::vec![Vec::new(); m];
        for (influencer, list) in strings.iter().enumerate() {
            let mut members: Vec<u16> = Vec::new();
            for raw in list {
                let lowered = raw.to_lowercase();
                for cat in match_dimension(&lowered, categories) {
                    if !members.contains(&cat) {
                        members.push(cat);
                    }
                }
            }
            members.sort_unstable();
            memberships[influencer] = members;
        }
        tags.insert(
            dimension,
            TagMatrix {
                dimension,
                categories: categories.iter().map(|c| c.name.clone()).collect(),
                memberships,
            },
        );
    }
    Ok(tags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{FollowGraph, Role, UserRecord};
    use alloc::vec;

    fn graph_with(influencers: &[&str], audience: &[&str]) -> FollowGraph {
        let mut records = Vec::new();
        for id in influencers {
            records.push(UserRecord {
                id: id.to_string(),
                role: Role::Influencer,
                follower_count: 0,
                eligible: true,
            });
        }
        for id in audience {
            records.push(UserRecord {
                id: id.to_string(),
                role: Role::Audience,
                follower_count: 0,
                eligible: true,
            });
        }
        FollowGraph::build(records, Vec::<(&str, &str)>::new()).unwrap()
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn names(tags: &TagSet, dim: IdentityDimension, influencer: usize) -> Vec<String> {
        let matrix = &tags[&dim];
        matrix
            .memberships(influencer)
            .iter()
            .map(|&c| matrix.categories()[c as usize].clone())
            .collect()
    }

    #[test]
    fn builtin_vocabulary_matches_stock_table() {
        let vocab = Vocabulary::builtin();
        let count = |d| vocab.categories(d).len();
        assert_eq!(count(IdentityDimension::Race), 5);
        assert_eq!(count(IdentityDimension::Gender), 3);
        assert_eq!(count(IdentityDimension::Lgbtq), 8);
        assert_eq!(count(IdentityDimension::Religion), 9);
        assert_eq!(count(IdentityDimension::Politics), 4);
        assert_eq!(vocab.categories(IdentityDimension::Race)[1].name, "African-American");
        assert_eq!(vocab.categories(IdentityDimension::Gender)[2].name, "Non-Binary");
    }

    #[test]
    fn metric_kinds_split_as_expected() {
        assert_eq!(IdentityDimension::Race.metric_kind(), MetricKind::Entropy);
        assert_eq!(IdentityDimension::Gender.metric_kind(), MetricKind::Entropy);
        for dim in [
            IdentityDimension::Lgbtq,
            IdentityDimension::Religion,
            IdentityDimension::Politics,
        ] {
            assert_eq!(dim.metric_kind(), MetricKind::Coverage);
        }
    }

    #[test]
    fn tags_wiki_style_category_string() {
        let graph = graph_with(&["k1"], &[]);
        let tags = tag_influencers(
            &graph,
            &Vocabulary::builtin(),
            &pairs(&[("k1", "African-American male actors")]),
        )
        .unwrap();
        assert_eq!(names(&tags, IdentityDimension::Race, 0), vec!["African-American"]);
        assert_eq!(names(&tags, IdentityDimension::Gender, 0), vec!["Male"]);
        assert!(names(&tags, IdentityDimension::Religion, 0).is_empty());
    }

    #[test]
    fn untagged_influencer_has_empty_memberships() {
        let graph = graph_with(&["k1"], &[]);
        let tags = tag_influencers(&graph, &Vocabulary::builtin(), &[]).unwrap();
        for dim in IdentityDimension::ALL {
            assert!(tags[&dim].memberships(0).is_empty());
        }
    }

    #[test]
    fn contained_term_collisions_are_suppressed() {
        let graph = graph_with(&["k1", "k2"], &[]);
        let tags = tag_influencers(
            &graph,
            &Vocabulary::builtin(),
            &pairs(&[("k1", "Female singers"), ("k2", "Caucasian players")]),
        )
        .unwrap();
        assert_eq!(names(&tags, IdentityDimension::Gender, 0), vec!["Female"]);
        assert_eq!(names(&tags, IdentityDimension::Race, 1), vec!["Caucasian"]);
    }

    #[test]
    fn inflected_forms_still_match() {
        let graph = graph_with(&["k1"], &[]);
        let tags = tag_influencers(
            &graph,
            &Vocabulary::builtin(),
            &pairs(&[("k1", "American Christians"), ("k1", "Democrats from Ohio")]),
        )
        .unwrap();
        assert_eq!(names(&tags, IdentityDimension::Religion, 0), vec!["Christian"]);
        assert_eq!(names(&tags, IdentityDimension::Politics, 0), vec!["Democrat"]);
    }

    #[test]
    fn separate_occurrences_both_match() {
        let graph = graph_with(&["k1"], &[]);
        let tags = tag_influencers(
            &graph,
            &Vocabulary::builtin(),
            &pairs(&[("k1", "males and females in film")]),
        )
        .unwrap();
        assert_eq!(
            names(&tags, IdentityDimension::Gender, 0),
            vec!["Male", "Female"]
        );
    }

    #[test]
    fn matching_is_case_insensitive() {
        let graph = graph_with(&["k1"], &[]);
        let tags = tag_influencers(&graph, &Vocabulary::builtin(), &pairs(&[("k1", "GAY icons")]))
            .unwrap();
        assert_eq!(names(&tags, IdentityDimension::Lgbtq, 0), vec!["Gay"]);
    }

    #[test]
    fn rejects_unknown_and_audience_users() {
        let graph = graph_with(&["k1"], &["a1"]);
        assert_eq!(
            tag_influencers(&graph, &Vocabulary::builtin(), &pairs(&[("ghost", "x")]))
                .unwrap_err(),
            TagError::UnknownUser {
                id: "ghost".to_string()
            }
        );
        assert_eq!(
            tag_influencers(&graph, &Vocabulary::builtin(), &pairs(&[("a1", "x")])).unwrap_err(),
            TagError::AudienceUserTagged {
                id: "a1".to_string()
            }
        );
    }

    #[test]
    fn vocabulary_validation() {
        let mut vocab = Vocabulary::empty();
        vocab
            .add_category(IdentityDimension::Race, "X", &["x"])
            .unwrap();
        assert!(matches!(
            vocab.add_category(IdentityDimension::Race, "X", &["y"]),
            Err(TagError::DuplicateCategory { .. })
        ));
        assert!(matches!(
            vocab.add_category(IdentityDimension::Race, "Y", &[""]),
            Err(TagError::EmptyTerm { .. })
        ));
    }

    #[test]
    fn custom_vocabulary_overrides_category_count() {
        let graph = graph_with(&["k1"], &[]);
        let mut vocab = Vocabulary::empty();
        vocab
            .add_category(IdentityDimension::Race, "A", &["alpha"])
            .unwrap();
        vocab
            .add_category(IdentityDimension::Race, "B", &["beta"])
            .unwrap();
        let tags = tag_influencers(&graph, &vocab, &pairs(&[("k1", "alpha things")])).unwrap();
        assert_eq!(tags[&IdentityDimension::Race].category_count(), 2);
        assert_eq!(names(&tags, IdentityDimension::Race, 0), vec!["A"]);
        // Dimensions absent from the vocabulary are empty but present.
        assert_eq!(tags[&IdentityDimension::Gender].category_count(), 0);
    }
}
