//! The immutable bipartite follow graph and the selection filters applied to
//! raw candidate graphs.
//!
//! Influencers occupy global indices `0..M`, audience members `M..M+N`. Every
//! follow edge points at an influencer; `out` rows hold the sorted influencer
//! indices a user follows, `in` rows the sorted global indices of the
//! *audience* members following an influencer (influencer-to-influencer
//! follows appear only on the `out` side). Construction validates roles,
//! duplicates and self-follows; after construction the graph never mutates,
//! so it can be shared freely across readers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::rng::substream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Influencer,
    Audience,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Influencer => "influencer",
            Role::Audience => "audience",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "influencer" => Some(Role::Influencer),
            "audience" => Some(Role::Audience),
            _ => None,
        }
    }
}

/// One user row: identity, role, platform-wide follower count and the
/// eligibility flag consumed by the selection filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserRecord {
    pub id: String,
    pub role: Role,
    pub follower_count: u64,
    pub eligible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("user id {id:?} is empty or contains tab/newline characters")]
    InvalidUserId { id: String },
    #[error("duplicate user {id:?}")]
    DuplicateUser { id: String },
    #[error("unknown user {id:?}")]
    UnknownUser { id: String },
    #[error("followee {id:?} is not an influencer")]
    NonInfluencerTarget { id: String },
    #[error("influencer {id:?} follows itself")]
    SelfFollow { id: String },
    #[error("duplicate edge {follower:?} -> {followee:?}")]
    DuplicateEdge { follower: String, followee: String },
    #[error("unknown seed user {id:?}")]
    UnknownSeed { id: String },
    #[error("influencer set is empty")]
    EmptyInfluencerSet,
    #[error("sample fraction {value} outside (0, 1]")]
    InvalidSampleFraction { value: f64 },
}

fn validate_id(id: &str) -> Result<(), GraphError> {
    if id.is_empty() || id.contains(['\t', '\n', '\r']) {
        return Err(GraphError::InvalidUserId {
            id: String::from(id),
        });
    }
    Ok(())
}

/// First builder stage: collect user records.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    users: Vec<UserRecord>,
    seen: BTreeMap<String, ()>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_user(&mut self, record: UserRecord) -> Result<(), GraphError> {
        validate_id(&record.id)?;
        if self.seen.insert(record.id.clone(), ()).is_some() {
            return Err(GraphError::DuplicateUser { id: record.id });
        }
        self.users.push(record);
        Ok(())
    }

    /// Freezes the user set, assigning global indices: influencers first (in
    /// arrival order), then audience members.
    pub fn finish_users(self) -> EdgeStage {
        let mut influencers = Vec::new();
        let mut audience = Vec::new();
        for record in self.users {
            match record.role {
                Role::Influencer => influencers.push(record),
                Role::Audience => audience.push(record),
            }
        }
        let mut id_index = BTreeMap::new();
        for (i, record) in influencers.iter().chain(audience.iter()).enumerate() {
            id_index.insert(record.id.clone(), i as u32);
        }
        EdgeStage {
            influencers,
            audience,
            id_index,
            edges: Vec::new(),
        }
    }
}

/// Second builder stage: users are frozen, edges accumulate.
#[derive(Debug)]
pub struct EdgeStage {
    influencers: Vec<UserRecord>,
    audience: Vec<UserRecord>,
    id_index: BTreeMap<String, u32>,
    /// (follower global index, followee influencer index)
    edges: Vec<(u32, u32)>,
}

impl EdgeStage {
    pub fn influencer_count(&self) -> usize {
        self.influencers.len()
    }

    pub fn user_count(&self) -> usize {
        self.influencers.len() + self.audience.len()
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.id_index.get(id).copied()
    }

    fn user_id(&self, index: u32) -> &str {
        let m = self.influencers.len();
        let index = index as usize;
        if index < m {
            &self.influencers[index].id
        } else {
            &self.audience[index - m].id
        }
    }

    pub fn add_edge(&mut self, follower: &str, followee: &str) -> Result<(), GraphError> {
        let follower_ix = self
            .index_of(follower)
            .ok_or_else(|| GraphError::UnknownUser {
                id: String::from(follower),
            })?;
        let followee_ix = self
            .index_of(followee)
            .ok_or_else(|| GraphError::UnknownUser {
                id: String::from(followee),
            })?;
        self.add_edge_indices(follower_ix, followee_ix)
    }

    /// Index-based variant for callers that already resolved ids.
    pub fn add_edge_indices(&mut self, follower: u32, followee: u32) -> Result<(), GraphError> {
        assert!((follower as usize) < self.user_count(), "follower index out of range");
        assert!((followee as usize) < self.user_count(), "followee index out of range");
        if followee as usize >= self.influencers.len() {
            return Err(GraphError::NonInfluencerTarget {
                id: String::from(self.user_id(followee)),
            });
        }
        if follower == followee {
            return Err(GraphError::SelfFollow {
                id: String::from(self.user_id(follower)),
            });
        }
        self.edges.push((follower, followee));
        Ok(())
    }

    pub fn finish(self) -> Result<FollowGraph, GraphError> {
        let m = self.influencers.len();
        let total = self.user_count();
        let mut edges = self.edges;
        edges.sort_unstable();
        if let Some(window) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge {
                follower: String::from(self.user_id(window[0].0)),
                followee: String::from(self.user_id(window[0].1)),
            });
        }

        let mut out_offsets = Vec::with_capacity(total + 1);
        out_offsets.push(0usize);
        let mut out_targets = Vec::with_capacity(edges.len());
        let mut cursor = 0usize;
        for user in 0..total as u32 {
            while cursor < edges.len() && edges[cursor].0 == user {
                out_targets.push(edges[cursor].1);
                cursor += 1;
            }
            out_offsets.push(out_targets.len());
        }

        // Audience block of the transpose.
        let mut in_degree = alloc::vec![0usize; m];
        let mut audience_edge_count = 0usize;
        for &(follower, followee) in &edges {
            if follower as usize >= m {
                in_degree[followee as usize] += 1;
                audience_edge_count += 1;
            }
        }
        let mut in_offsets = Vec::with_capacity(m + 1);
        in_offsets.push(0usize);
        for d in &in_degree {
            in_offsets.push(in_offsets.last().unwrap() + d);
        }
        let mut in_targets = alloc::vec![0u32; audience_edge_count];
        let mut fill = in_offsets.clone();
        for &(follower, followee) in &edges {
            if follower as usize >= m {
                in_targets[fill[followee as usize]] = follower;
                fill[followee as usize] += 1;
            }
        }
        // Edges are sorted by follower within each followee bucket already
        // because the fill pass walks edges in (follower, followee) order...
        // except the pass walks followee buckets out of order, so sort rows.
        for i in 0..m {
            in_targets[in_offsets[i]..in_offsets[i + 1]].sort_unstable();
        }

        Ok(FollowGraph {
            influencers: self.influencers,
            audience: self.audience,
            id_index: self.id_index,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            audience_edge_count,
        })
    }
}

/// Immutable bipartite follow graph.
#[derive(Debug, Clone)]
pub struct FollowGraph {
    influencers: Vec<UserRecord>,
    audience: Vec<UserRecord>,
    id_index: BTreeMap<String, u32>,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_targets: Vec<u32>,
    audience_edge_count: usize,
}

impl FollowGraph {
    /// Convenience constructor from records plus id-pair edges.
    pub fn build<I, S>(records: Vec<UserRecord>, edges: I) -> Result<FollowGraph, GraphError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut builder = GraphBuilder::new();
        for record in records {
            builder.add_user(record)?;
        }
        let mut stage = builder.finish_users();
        for (follower, followee) in edges {
            stage.add_edge(follower.as_ref(), followee.as_ref())?;
        }
        stage.finish()
    }

    pub fn influencer_count(&self) -> usize {
        self.influencers.len()
    }

    pub fn audience_count(&self) -> usize {
        self.audience.len()
    }

    pub fn user_count(&self) -> usize {
        self.influencers.len() + self.audience.len()
    }

    pub fn influencer_records(&self) -> &[UserRecord] {
        &self.influencers
    }

    pub fn audience_records(&self) -> &[UserRecord] {
        &self.audience
    }

    pub fn is_influencer(&self, user: usize) -> bool {
        user < self.influencers.len()
    }

    pub fn record(&self, user: usize) -> &UserRecord {
        let m = self.influencers.len();
        if user < m {
            &self.influencers[user]
        } else {
            &self.audience[user - m]
        }
    }

    pub fn user_id(&self, user: usize) -> &str {
        &self.record(user).id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).map(|&i| i as usize)
    }

    /// Sorted influencer indices this user follows.
    pub fn followees(&self, user: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[user]..self.out_offsets[user + 1]]
    }

    /// Sorted global indices of the audience members following this influencer.
    pub fn audience_followers(&self, influencer: usize) -> &[u32] {
        debug_assert!(influencer < self.influencer_count());
        &self.in_targets[self.in_offsets[influencer]..self.in_offsets[influencer + 1]]
    }

    /// Number of audience-to-influencer edges.
    pub fn audience_edge_count(&self) -> usize {
        self.audience_edge_count
    }

    pub fn total_edge_count(&self) -> usize {
        self.out_targets.len()
    }

    /// New graph keeping all influencers but only the audience members at the
    /// given (sorted, deduplicated) audience-local positions.
    pub fn restrict_audience(&self, keep: &[usize]) -> FollowGraph {
        let m = self.influencers.len();
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(keep.iter().all(|&a| a < self.audience.len()));

        let audience: Vec<UserRecord> = keep.iter().map(|&a| self.audience[a].clone()).collect();
        let mut id_index = BTreeMap::new();
        for (i, record) in self.influencers.iter().chain(audience.iter()).enumerate() {
            id_index.insert(record.id.clone(), i as u32);
        }

        let mut out_offsets = Vec::with_capacity(m + audience.len() + 1);
        let mut out_targets = Vec::new();
        out_offsets.push(0usize);
        for user in 0..m {
            out_targets.extend_from_slice(self.followees(user));
            out_offsets.push(out_targets.len());
        }
        for &a in keep {
            out_targets.extend_from_slice(self.followees(m + a));
            out_offsets.push(out_targets.len());
        }

        // Old global audience index -> new global index.
        let mut remap = BTreeMap::new();
        for (new_pos, &a) in keep.iter().enumerate() {
            remap.insert((m + a) as u32, (m + new_pos) as u32);
        }
        let mut in_offsets = Vec::with_capacity(m + 1);
        let mut in_targets = Vec::new();
        in_offsets.push(0usize);
        let mut audience_edge_count = 0usize;
        for influencer in 0..m {
            for follower in self.audience_followers(influencer) {
                if let Some(&new_ix) = remap.get(follower) {
                    in_targets.push(new_ix);
                    audience_edge_count += 1;
                }
            }
            in_offsets.push(in_targets.len());
        }

        FollowGraph {
            influencers: self.influencers.clone(),
            audience,
            id_index,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            audience_edge_count,
        }
    }
}

/// A node of the raw candidate graph the selection filters run on: no role
/// assignment yet, follow edges may point at anyone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRecord {
    pub id: String,
    pub follower_count: u64,
    pub eligible: bool,
}

/// Raw candidate graph for influencer/audience selection.
#[derive(Debug, Clone)]
pub struct CandidateGraph {
    records: Vec<CandidateRecord>,
    id_index: BTreeMap<String, u32>,
    followees: Vec<Vec<u32>>,
}

impl CandidateGraph {
    pub fn build<I, S>(records: Vec<CandidateRecord>, edges: I) -> Result<CandidateGraph, GraphError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut id_index = BTreeMap::new();
        for (i, record) in records.iter().enumerate() {
            validate_id(&record.id)?;
            if id_index.insert(record.id.clone(), i as u32).is_some() {
                return Err(GraphError::DuplicateUser {
                    id: record.id.clone(),
                });
            }
        }
        let mut followees = alloc::vec![Vec::new(); records.len()];
        for (follower, followee) in edges {
            let f = *id_index
                .get(follower.as_ref())
                .ok_or_else(|| GraphError::UnknownUser {
                    id: String::from(follower.as_ref()),
                })?;
            let t = *id_index
                .get(followee.as_ref())
                .ok_or_else(|| GraphError::UnknownUser {
                    id: String::from(followee.as_ref()),
                })?;
            followees[f as usize].push(t);
        }
        for list in &mut followees {
            list.sort_unstable();
            list.dedup();
        }
        Ok(CandidateGraph {
            records,
            id_index,
            followees,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(&self, index: usize) -> &CandidateRecord {
        &self.records[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).map(|&i| i as usize)
    }

    pub fn followees(&self, index: usize) -> &[u32] {
        &self.followees[index]
    }
}

/// Users reachable along followee edges in exactly 1 or 2 hops from any seed,
/// filtered to `follower_count > min_followers` and, optionally, to eligible
/// users. Seeds are treated like any other node: one appears in the result
/// only if another seed reaches it in 1–2 hops and it passes the filters.
pub fn select_influencers(
    graph: &CandidateGraph,
    seeds: &[&str],
    min_followers: u64,
    require_eligible: bool,
) -> Result<BTreeSet<String>, GraphError> {
    let mut seed_ixs = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let ix = graph.index_of(seed).ok_or_else(|| GraphError::UnknownSeed {
            id: String::from(*seed),
        })?;
        seed_ixs.push(ix);
    }

    let mut reached = alloc::vec![false; graph.len()];
    let mut layer1 = Vec::new();
    for &seed in &seed_ixs {
        for &next in graph.followees(seed) {
            if !reached[next as usize] {
                reached[next as usize] = true;
                layer1.push(next);
            }
        }
    }
    let mut layer2 = Vec::new();
    for &mid in &layer1 {
        for &next in graph.followees(mid as usize) {
            if !reached[next as usize] {
                reached[next as usize] = true;
                layer2.push(next);
            }
        }
    }

    let mut selected = BTreeSet::new();
    for &ix in layer1.iter().chain(layer2.iter()) {
        let record = graph.record(ix as usize);
        if record.follower_count > min_followers && (!require_eligible || record.eligible) {
            selected.insert(record.id.clone());
        }
    }
    Ok(selected)
}

/// Seeded uniform sample (without replacement) of the followers of the
/// influencer set, kept only if they follow at least
/// `min_followees_in_set` influencers within the set. Members of the
/// influencer set itself are never audience candidates.
pub fn select_audience(
    graph: &CandidateGraph,
    influencers: &BTreeSet<String>,
    sample_fraction: f64,
    min_followees_in_set: usize,
    rng_seed: u64,
) -> Result<BTreeSet<String>, GraphError> {
    if influencers.is_empty() {
        return Err(GraphError::EmptyInfluencerSet);
    }
    if !(sample_fraction > 0.0 && sample_fraction <= 1.0) {
        return Err(GraphError::InvalidSampleFraction {
            value: sample_fraction,
        });
    }
    let mut influencer_ixs = alloc::vec![false; graph.len()];
    for id in influencers {
        let ix = graph.index_of(id).ok_or_else(|| GraphError::UnknownUser {
            id: id.clone(),
        })?;
        influencer_ixs[ix] = true;
    }

    // Followers of the set, in index order, with their in-set followee count.
    let mut candidates = Vec::new();
    for user in 0..graph.len() {
        if influencer_ixs[user] {
            continue;
        }
        let in_set = graph
            .followees(user)
            .iter()
            .filter(|&&t| influencer_ixs[t as usize])
            .count();
        if in_set > 0 {
            candidates.push((user, in_set));
        }
    }

    let take = (sample_fraction * candidates.len() as f64).round() as usize;
    let take = take.min(candidates.len());
    if take < candidates.len() {
        // Partial Fisher-Yates: the first `take` slots become the sample.
        let mut rng = substream_rng(rng_seed, 0);
        for i in 0..take {
            let j = rng.random_range(i..candidates.len());
            candidates.swap(i, j);
        }
        candidates.truncate(take);
    }

    Ok(candidates
        .into_iter()
        .filter(|&(_, in_set)| in_set >= min_followees_in_set)
        .map(|(user, _)| graph.record(user).id.clone())
        .collect())
}
