#include "densepath/encoder.hpp"

#include <array>
#include <stdexcept>

namespace densepath {

Tensor polyline_features(const VectorSeq& seq) {
  const int n = static_cast<int>(seq.vectors.size());
  if (n == 0) throw std::invalid_argument("polyline_features: empty polyline");
  Tensor out = Tensor::zeros({n, kVectorFeatureDim});
  for (int i = 0; i < n; ++i) {
    const SceneVector& v = seq.vectors[static_cast<std::size_t>(i)];
    double* row = out.data.data() + static_cast<std::size_t>(i) * kVectorFeatureDim;
    row[0] = v.start.x * kCoordScale;
    row[1] = v.start.y * kCoordScale;
    row[2] = v.end.x * kCoordScale;
    row[3] = v.end.y * kCoordScale;
    row[4] = v.t_start;
    row[5] = v.t_end;
    row[6] = v.is_agent ? 1.0 : 0.0;
    row[7] = v.is_agent ? 0.0 : 1.0;
    for (int a = 0; a < kVectorAttrs; ++a) row[8 + a] = v.attr[static_cast<std::size_t>(a)];
    // metric attributes share the coordinate scale:
    // agents carry (speed, length, width) in attr[3..5], lanes their width in attr[0]
    if (v.is_agent) {
      row[8 + 3] *= kCoordScale;
      row[8 + 4] *= kCoordScale;
      row[8 + 5] *= kCoordScale;
    } else {
      row[8 + 0] *= kCoordScale;
    }
  }
  return out;
}

Mlp2Ref register_mlp2(ParamStore& ps, const std::string& prefix, int d_in, int d_hidden, int d_out,
                      Rng& rng) {
  Mlp2Ref r;
  r.w1 = ps.add_uniform(prefix + ".w1", {d_in, d_hidden}, d_in, rng);
  r.b1 = ps.add_uniform(prefix + ".b1", {1, d_hidden}, d_in, rng);
  r.w2 = ps.add_uniform(prefix + ".w2", {d_hidden, d_out}, d_hidden, rng);
  r.b2 = ps.add_uniform(prefix + ".b2", {1, d_out}, d_hidden, rng);
  return r;
}

AttentionRef register_attention(ParamStore& ps, const std::string& prefix, int d_model, int d_k,
                                Rng& rng) {
  AttentionRef r;
  r.wq = ps.add_uniform(prefix + ".wq", {d_model, d_k}, d_model, rng);
  r.wk = ps.add_uniform(prefix + ".wk", {d_model, d_k}, d_model, rng);
  r.wv = ps.add_uniform(prefix + ".wv", {d_model, d_k}, d_model, rng);
  return r;
}

SubgraphParams register_subgraph(ParamStore& ps, const std::string& prefix, int in_dim, int hidden,
                                 int depth, Rng& rng) {
  if (hidden % 2 != 0) throw std::invalid_argument("subgraph hidden size must be even");
  if (depth < 1) throw std::invalid_argument("subgraph depth must be >= 1");
  SubgraphParams sg;
  sg.hidden = hidden;
  const int half = hidden / 2;
  int d = in_dim;
  for (int l = 0; l < depth; ++l) {
    SubgraphParams::Layer layer;
    const std::string p = prefix + ".l" + std::to_string(l);
    layer.w = ps.add_uniform(p + ".w", {d, half}, d, rng);
    layer.b = ps.add_uniform(p + ".b", {1, half}, d, rng);
    sg.layers.push_back(layer);
    d = hidden;  // concat(per-vector half, pooled half)
  }
  return sg;
}

Mlp2Vars bind_mlp2(Tape& tape, const ParamStore& ps, const Mlp2Ref& ref) {
  Mlp2Vars m;
  m.w1 = tape.param(ps, ref.w1);
  m.b1 = tape.param(ps, ref.b1);
  m.w2 = tape.param(ps, ref.w2);
  m.b2 = tape.param(ps, ref.b2);
  return m;
}

Var subgraph_encode(Tape& tape, const VectorSeq& seq, const SubgraphParams& sg,
                    const ParamStore& ps) {
  const int n = static_cast<int>(seq.vectors.size());
  Var h = tape.constant(polyline_features(seq));
  for (const auto& layer : sg.layers) {
    Var w = tape.param(ps, layer.w);
    Var b = tape.param(ps, layer.b);
    Var enc = tape.relu(tape.add_row_vector(tape.matmul(h, w), b));
    Var pooled = tape.max_pool_rows(enc);
    std::array<Var, 2> parts{enc, tape.broadcast_rows(pooled, n)};
    h = tape.concat_cols(parts);
  }
  return tape.max_pool_rows(h);
}

Var global_graph(Tape& tape, Var features, const AttentionRef& attn, const ParamStore& ps) {
  Var wq = tape.param(ps, attn.wq);
  Var wk = tape.param(ps, attn.wk);
  Var wv = tape.param(ps, attn.wv);
  Var att = tape.attention(tape.matmul(features, wq), tape.matmul(features, wk),
                           tape.matmul(features, wv));
  return tape.add(att, features);
}

Var subgraph_stack(Tape& tape, const std::vector<VectorSeq>& polylines, const SubgraphParams& sg,
                   const ParamStore& ps) {
  if (polylines.empty()) throw std::invalid_argument("subgraph_stack: no polylines");
  std::vector<Var> rows;
  rows.reserve(polylines.size());
  for (const auto& seq : polylines) rows.push_back(subgraph_encode(tape, seq, sg, ps));
  return tape.concat_rows(rows);
}

SceneFeatures make_scene_features(Tape& tape, Var stack, const std::vector<VectorSeq>& polylines,
                                  std::int64_t target_id, const AttentionRef& branch_attn,
                                  const ParamStore& ps) {
  SceneFeatures sf;
  sf.elements = global_graph(tape, stack, branch_attn, ps);
  sf.index.reserve(polylines.size());
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    sf.index.push_back({polylines[i].owner, polylines[i].owner_id});
    if (polylines[i].owner == VectorSeq::Owner::kAgent && polylines[i].owner_id == target_id) {
      sf.target_row = static_cast<int>(i);
    }
  }
  if (sf.target_row < 0) throw std::invalid_argument("make_scene_features: target polyline missing");
  return sf;
}

}  // namespace densepath
