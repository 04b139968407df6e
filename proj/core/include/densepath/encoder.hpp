#pragma once

#include <string>
#include <vector>

#include "densepath/scene.hpp"
#include "densepath/tape.hpp"

namespace densepath {

// Width of the per-vector input feature row:
// [x0, y0, x1, y1, t_start, t_end, is_agent, is_lane, attr...]
inline constexpr int kVectorFeatureDim = 8 + kVectorAttrs;

// Metric inputs (coordinates, widths, speeds) are fed to the network in
// decameters. Keeps first-layer activations and attention logits O(1) at
// init; everything outside the encoders stays in meters.
inline constexpr double kCoordScale = 0.2;

Tensor polyline_features(const VectorSeq& seq);

// ParamStore index bundles.
struct Mlp2Ref {
  int w1 = -1, b1 = -1, w2 = -1, b2 = -1;
};

struct AttentionRef {
  int wq = -1, wk = -1, wv = -1;
};

struct SubgraphParams {
  struct Layer {
    int w = -1, b = -1;
  };
  std::vector<Layer> layers;
  int hidden = 0;
};

Mlp2Ref register_mlp2(ParamStore& ps, const std::string& prefix, int d_in, int d_hidden, int d_out,
                      Rng& rng);
AttentionRef register_attention(ParamStore& ps, const std::string& prefix, int d_model, int d_k,
                                Rng& rng);
// `depth` layers of Linear(d -> hidden/2) + ReLU, each concatenated with its
// max-pool aggregate; hidden must be even.
SubgraphParams register_subgraph(ParamStore& ps, const std::string& prefix, int in_dim, int hidden,
                                 int depth, Rng& rng);

Mlp2Vars bind_mlp2(Tape& tape, const ParamStore& ps, const Mlp2Ref& ref);

// Per-polyline encoder: permutation-sensitive per-vector encoding with an
// order-insensitive max-pool aggregate, repeated `depth` times, then a final
// max-pool. Returns a 1 x hidden feature.
Var subgraph_encode(Tape& tape, const VectorSeq& seq, const SubgraphParams& sg,
                    const ParamStore& ps);

// One round of self-attention over the stacked element features plus a
// residual connection. features: n x hidden -> n x hidden.
Var global_graph(Tape& tape, Var features, const AttentionRef& attn, const ParamStore& ps);

struct ElementInfo {
  VectorSeq::Owner kind = VectorSeq::Owner::kLane;
  std::int64_t owner_id = 0;
};

// Feature matrix over all scene elements of one branch plus the element index.
struct SceneFeatures {
  Var elements;  // n_elements x hidden
  std::vector<ElementInfo> index;
  int target_row = -1;
};

// Stacks subgraph features for all polylines (agents first, lanes after, in
// input order). The result feeds every branch's global graph so the subgraph
// weights are physically shared.
Var subgraph_stack(Tape& tape, const std::vector<VectorSeq>& polylines, const SubgraphParams& sg,
                   const ParamStore& ps);

SceneFeatures make_scene_features(Tape& tape, Var stack, const std::vector<VectorSeq>& polylines,
                                  std::int64_t target_id, const AttentionRef& branch_attn,
                                  const ParamStore& ps);

}  // namespace densepath
