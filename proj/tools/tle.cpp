// Command-line front end: synthetic data generation, training, evaluation,
// gradient checking, late fusion, and the bilinear-vs-sketch bench.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tle/tle.hpp"

namespace {

using namespace tle;

// plain key=value lines; unknown keys are an error
void apply_config_file(TrainConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "k") cfg.k = std::stoul(val);
    else if (key == "aggregation") cfg.aggregation = aggregation_from_string(val);
    else if (key == "encoder") cfg.encoder = encoder_from_string(val);
    else if (key == "sketch_dim") cfg.sketch_dim = std::stoul(val);
    else if (key == "fc_dim") cfg.fc_dim = std::stoul(val);
    else if (key == "lr_init") cfg.lr_init = std::stod(val);
    else if (key == "lr_decay") cfg.lr_decay = std::stod(val);
    else if (key == "lr_decay_interval") cfg.lr_decay_interval = std::stoul(val);
    else if (key == "max_iters") cfg.max_iters = std::stoul(val);
    else if (key == "momentum") cfg.momentum = std::stod(val);
    else if (key == "weight_decay") cfg.weight_decay = std::stod(val);
    else if (key == "batch_size") cfg.batch_size = std::stoul(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "phase1_iters") cfg.phase1_iters = std::stoul(val);
    else if (key == "test_groups") cfg.test_groups = std::stoul(val);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key " + key);
  }
}

struct LogitRow {
  std::string id;
  std::size_t label;
  EncodedVector scores;
};

std::vector<LogitRow> read_logits(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open logits file " + path);
  std::vector<LogitRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    LogitRow r;
    std::string field;
    if (!std::getline(ls, r.id, ',')) continue;
    if (!std::getline(ls, field, ','))
      throw std::runtime_error("malformed logits line: " + line);
    r.label = std::stoul(field);
    while (std::getline(ls, field, ',')) r.scores.push_back(std::stod(field));
    if (r.scores.empty())
      throw std::runtime_error("logits line without scores: " + line);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::runtime_error("empty logits file " + path);
  return rows;
}

void write_logits(const std::vector<LogitRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& r : rows) {
    out << r.id << ',' << r.label;
    for (double s : r.scores) out << ',' << s;
    out << '\n';
  }
}

int cmd_synth(const SynthConfig& cfg, const std::string& out_path) {
  auto ds = synth_dataset(cfg);
  write_dataset(ds, out_path);
  std::cout << "wrote " << ds.videos.size() << " videos, " << ds.classes
            << " classes to " << out_path << "\n";
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& model_path,
              const std::string& log_path, const TrainConfig& cfg) {
  auto ds = read_dataset(data_path);
  std::ofstream log;
  std::ostream* logp = nullptr;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw std::runtime_error("cannot open log file " + log_path);
    logp = &log;
  }
  auto model = train(ds, cfg, logp);
  save_model(model, model_path);
  auto ev = evaluate(model, ds, 1);
  std::cout << "trained " << model.iters_done << " iterations, train accuracy "
            << ev.accuracy << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             std::size_t groups, const std::string& dump_path) {
  auto model = load_model(model_path);
  auto ds = read_dataset(data_path);
  if (groups == 0) groups = model.cfg.test_groups;
  auto ev = evaluate(model, ds, groups);
  std::cout << "accuracy " << ev.accuracy << " over " << ds.videos.size()
            << " videos (" << groups << " groups)\n";
  std::cout << "class,correct,total\n";
  for (std::size_t c = 0; c < ds.classes; ++c)
    std::cout << ds.class_names[c] << ',' << ev.per_class_correct[c] << ','
              << ev.per_class_total[c] << '\n';
  if (!dump_path.empty()) {
    std::vector<LogitRow> rows;
    for (std::size_t i = 0; i < ds.videos.size(); ++i)
      rows.push_back(LogitRow{ds.videos[i].id, ds.videos[i].label,
                              ev.predictions[i].scores});
    write_logits(rows, dump_path);
    std::cout << "wrote per-video logits to " << dump_path << "\n";
  }
  return 0;
}

int cmd_fuse(const std::string& path_a, const std::string& path_b, double wa,
             double wb, const std::string& out_path) {
  auto a = read_logits(path_a);
  auto b = read_logits(path_b);
  if (a.size() != b.size())
    throw std::runtime_error("logit files disagree on video count");
  std::size_t correct = 0;
  std::vector<LogitRow> fused_rows;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id)
      throw std::runtime_error("logit files disagree on video ids at row " +
                               std::to_string(i));
    auto fused = fuse_streams(a[i].scores, b[i].scores, wa, wb);
    std::size_t amax = 0;
    for (std::size_t j = 1; j < fused.size(); ++j)
      if (fused[j] > fused[amax]) amax = j;
    if (amax == a[i].label) ++correct;
    fused_rows.push_back(LogitRow{a[i].id, a[i].label, std::move(fused)});
  }
  const double acc = static_cast<double>(correct) / a.size();
  std::cout << "fused accuracy " << acc << " over " << a.size() << " videos\n";
  if (!out_path.empty()) write_logits(fused_rows, out_path);
  return 0;
}

// The gradient suites: every backward pass, randomized trials against
// central finite differences.
struct Suite {
  std::string name;
  double tol;
  std::function<CheckCase(std::uint64_t)> gen;
};

FeatureMap rnd_map(SplitMix64& rng, std::size_t h, std::size_t w,
                   std::size_t c, double lo_mag = 0.2, double hi_mag = 1.2) {
  std::vector<double> v(h * w * c);
  for (auto& x : v) {
    const double mag = rng.uniform(lo_mag, hi_mag);
    x = (rng.next() & 1) ? mag : -mag;
  }
  return FeatureMap(h, w, c, std::move(v));
}

std::vector<Suite> gradient_suites() {
  std::vector<Suite> suites;

  for (auto mode : {AggregationMode::Average, AggregationMode::Maximum,
                    AggregationMode::Product}) {
    suites.push_back(Suite{
        std::string("aggregate_") + to_string(mode), 1e-6,
        [mode](std::uint64_t t) {
          SplitMix64 rng(mix_seed(0xA66ULL + static_cast<int>(mode), t));
          const std::size_t k = 2 + rng.below(3);
          const std::size_t h = 1 + rng.below(3), w = 1 + rng.below(3),
                            c = 1 + rng.below(5);
          const std::size_t n = h * w * c;
          std::vector<FeatureMap> segs;
          for (std::size_t j = 0; j < k; ++j) {
            // max mode: spread magnitudes so per-element arg-max margins
            // stay above twice the finite-difference step
            FeatureMap m = rnd_map(rng, h, w, c);
            if (mode == AggregationMode::Maximum)
              for (std::size_t i = 0; i < n; ++i)
                m[i] += static_cast<double>(j) * 3.0;
            segs.push_back(std::move(m));
          }
          SegmentSet s(segs);
          FeatureMap dx = rnd_map(rng, h, w, c);
          auto analytic = aggregate_backward(s, mode, dx);
          CheckCase cc;
          for (auto& seg : segs)
            cc.x.insert(cc.x.end(), seg.values().begin(), seg.values().end());
          cc.f = [k, h, w, c, n, mode, dx](const std::vector<double>& x) {
            std::vector<FeatureMap> ss;
            for (std::size_t j = 0; j < k; ++j)
              ss.emplace_back(h, w, c,
                              std::vector<double>(x.begin() + j * n,
                                                  x.begin() + (j + 1) * n));
            auto out = aggregate_forward(SegmentSet(ss), mode);
            double loss = 0;
            for (std::size_t i = 0; i < n; ++i) loss += dx[i] * out[i];
            return loss;
          };
          for (auto& g : analytic)
            cc.analytic.insert(cc.analytic.end(), g.values().begin(),
                               g.values().end());
          cc.replay = segs;
          return cc;
        }});
  }

  suites.push_back(Suite{
      "bilinear", 1e-6, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0xB111ULL, t));
        const std::size_t h = 1 + rng.below(2), w = 1 + rng.below(2),
                          c = 2 + rng.below(3);
        FeatureMap x = rnd_map(rng, h, w, c);
        std::vector<double> dy(c * c);
        for (auto& v : dy) v = rng.uniform(-1, 1);
        auto analytic = bilinear_backward(x, dy);
        CheckCase cc;
        cc.x = x.values();
        cc.f = [h, w, c, dy](const std::vector<double>& v) {
          auto y = bilinear_forward(FeatureMap(h, w, c, v));
          double loss = 0;
          for (std::size_t i = 0; i < y.size(); ++i) loss += dy[i] * y[i];
          return loss;
        };
        cc.analytic = analytic.values();
        cc.replay = {x};
        return cc;
      }});

  suites.push_back(Suite{
      "tensor_sketch", 1e-5, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0x75ULL, t));
        const std::size_t h = 1 + rng.below(2), w = 1 + rng.below(2),
                          c = 2 + rng.below(5), d = 8 + rng.below(9);
        auto enc = TensorSketchEncoder::make(c, d, rng.next());
        FeatureMap x = rnd_map(rng, h, w, c);
        std::vector<double> dy(d);
        for (auto& v : dy) v = rng.uniform(-1, 1);
        auto analytic = tensor_sketch_backward(x, enc, dy);
        CheckCase cc;
        cc.x = x.values();
        cc.f = [h, w, c, enc, dy](const std::vector<double>& v) {
          auto y = tensor_sketch_forward(FeatureMap(h, w, c, v), enc);
          double loss = 0;
          for (std::size_t i = 0; i < y.size(); ++i) loss += dy[i] * y[i];
          return loss;
        };
        cc.analytic = analytic.values();
        cc.replay = {x};
        return cc;
      }});

  suites.push_back(Suite{
      "signed_sqrt", 1e-6, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0x5157ULL, t));
        const std::size_t n = 4 + rng.below(8);
        CheckCase cc;
        cc.x.resize(n);
        std::vector<double> up(n);
        for (auto& v : cc.x) {
          v = rng.uniform(0.15, 2.0);  // clear of the kink
          if (rng.next() & 1) v = -v;
        }
        for (auto& v : up) v = rng.uniform(-1, 1);
        cc.analytic = signed_sqrt_backward(cc.x, up);
        cc.f = [up](const std::vector<double>& y) {
          auto z = signed_sqrt(y);
          double loss = 0;
          for (std::size_t i = 0; i < z.size(); ++i) loss += up[i] * z[i];
          return loss;
        };
        return cc;
      }});

  suites.push_back(Suite{
      "l2_normalize", 1e-6, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0x12ULL, t));
        const std::size_t n = 4 + rng.below(8);
        CheckCase cc;
        cc.x.resize(n);
        std::vector<double> up(n);
        for (auto& v : cc.x) v = rng.uniform(0.2, 2.0);
        for (auto& v : up) v = rng.uniform(-1, 1);
        cc.analytic = l2_normalize_backward(cc.x, up);
        cc.f = [up](const std::vector<double>& z) {
          auto o = l2_normalize(z);
          double loss = 0;
          for (std::size_t i = 0; i < o.size(); ++i) loss += up[i] * o[i];
          return loss;
        };
        return cc;
      }});

  suites.push_back(Suite{
      "fc_encoder", 1e-6, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0xFCULL, t));
        const std::size_t h = 1 + rng.below(2), w = 1 + rng.below(2),
                          c = 2 + rng.below(3), out = 2 + rng.below(4);
        FcEncoder enc = FcEncoder::zeros(h * w * c, out);
        for (auto& v : enc.weight) v = rng.uniform(-1, 1);
        for (auto& v : enc.bias) v = rng.uniform(-1, 1);
        FeatureMap x = rnd_map(rng, h, w, c);
        std::vector<double> up(out);
        for (auto& v : up) v = rng.uniform(-1, 1);
        auto g = fc_backward(x, enc, up);
        // joint check over (input, weight, bias)
        CheckCase cc;
        cc.x = x.values();
        cc.x.insert(cc.x.end(), enc.weight.begin(), enc.weight.end());
        cc.x.insert(cc.x.end(), enc.bias.begin(), enc.bias.end());
        const std::size_t n = h * w * c;
        cc.f = [h, w, c, n, out, up](const std::vector<double>& v) {
          FcEncoder e = FcEncoder::zeros(n, out);
          std::copy(v.begin() + n, v.begin() + n + n * out, e.weight.begin());
          std::copy(v.begin() + n + n * out, v.end(), e.bias.begin());
          auto y = fc_encode(
              FeatureMap(h, w, c, std::vector<double>(v.begin(), v.begin() + n)),
              e);
          double loss = 0;
          for (std::size_t i = 0; i < y.size(); ++i) loss += up[i] * y[i];
          return loss;
        };
        cc.analytic = g.dx.values();
        cc.analytic.insert(cc.analytic.end(), g.dweight.begin(),
                           g.dweight.end());
        cc.analytic.insert(cc.analytic.end(), g.dbias.begin(), g.dbias.end());
        cc.replay = {x};
        return cc;
      }});

  suites.push_back(Suite{
      "classifier", 1e-5, [](std::uint64_t t) {
        SplitMix64 rng(mix_seed(0xC1A5ULL, t));
        const std::size_t dim = 3 + rng.below(5),
                          classes = 2 + rng.below(4);
        ClassifierHead head = ClassifierHead::zeros(dim, classes);
        for (auto& v : head.weight) v = rng.uniform(-1, 1);
        for (auto& v : head.bias) v = rng.uniform(-1, 1);
        std::vector<double> z(dim);
        for (auto& v : z) v = rng.uniform(-1, 1);
        const std::size_t label = rng.below(classes);
        auto sm = softmax_cross_entropy(head.logits(z), label);
        auto g = head_backward(head, z, sm.dlogits);
        CheckCase cc;
        cc.x = z;
        cc.x.insert(cc.x.end(), head.weight.begin(), head.weight.end());
        cc.x.insert(cc.x.end(), head.bias.begin(), head.bias.end());
        cc.f = [dim, classes, label](const std::vector<double>& v) {
          ClassifierHead h2 = ClassifierHead::zeros(dim, classes);
          std::copy(v.begin() + dim, v.begin() + dim + dim * classes,
                    h2.weight.begin());
          std::copy(v.begin() + dim + dim * classes, v.end(), h2.bias.begin());
          std::vector<double> zz(v.begin(), v.begin() + dim);
          return softmax_cross_entropy(h2.logits(zz), label).loss;
        };
        cc.analytic = g.dz;
        cc.analytic.insert(cc.analytic.end(), g.dweight.begin(),
                           g.dweight.end());
        cc.analytic.insert(cc.analytic.end(), g.dbias.begin(), g.dbias.end());
        return cc;
      }});

  return suites;
}

int cmd_gradcheck(std::size_t trials, const std::string& replay_dir) {
  bool all_pass = true;
  for (const auto& suite : gradient_suites()) {
    const std::string prefix =
        replay_dir.empty() ? "" : replay_dir + "/" + suite.name;
    auto rep = run_check(suite.gen, trials, suite.tol, kGradCheckStep, prefix);
    std::printf("%-20s %-4s max rel err %.3e (tol %.0e)\n", suite.name.c_str(),
                rep.pass ? "PASS" : "FAIL", rep.max_rel_err, suite.tol);
    if (!rep.pass) {
      all_pass = false;
      std::printf("  trial %zu coord %zu analytic %.9g numeric %.9g\n",
                  rep.worst_trial, rep.worst_coord, rep.worst_analytic,
                  rep.worst_numeric);
      if (!rep.replay_path.empty())
        std::printf("  replay instance written to %s\n",
                    rep.replay_path.c_str());
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_bench(std::size_t c, std::size_t d, std::size_t h, std::size_t w) {
  std::cout << "channels c = " << c << "\n";
  std::cout << "full bilinear dimension: " << c * c << "\n";
  std::cout << "compact sketch dimension: " << d << "\n";

  FeatureMap x(h, w, c, std::vector<double>(h * w * c, 0.5));
  auto enc = TensorSketchEncoder::make(c, d, 1);
  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  auto ys = tensor_sketch_forward(x, enc);
  auto t1 = clock::now();
  const double sketch_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  t0 = clock::now();
  auto yb = bilinear_forward(x);
  t1 = clock::now();
  const double bilinear_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();

  std::printf("encoder,dim,forward_ms\n");
  std::printf("bilinear,%zu,%.3f\n", yb.size(), bilinear_ms);
  std::printf("tensor_sketch,%zu,%.3f\n", ys.size(), sketch_ms);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal linear encoding toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  SynthConfig scfg;
  std::string synth_out, synth_split = "train";
  synth->add_option("--out", synth_out, "output TLEF path")->required();
  synth->add_option("--classes", scfg.classes);
  synth->add_option("--videos-per-class", scfg.videos_per_class);
  synth->add_option("--frames", scfg.frames_per_video);
  synth->add_option("--height", scfg.h);
  synth->add_option("--width", scfg.w);
  synth->add_option("--channels", scfg.c);
  synth->add_option("--difficulty", scfg.difficulty);
  synth->add_option("--seed", scfg.seed);
  synth->add_option("--split", synth_split)
      ->check(CLI::IsMember({"train", "test"}));

  // train
  auto* tr = app.add_subcommand("train", "train a TLE model");
  std::string tr_data, tr_model, tr_log, tr_config;
  TrainConfig tcfg;
  std::string tr_agg, tr_enc;
  tr->add_option("--data", tr_data, "training TLEF dataset")->required();
  tr->add_option("--out", tr_model, "output model path")->required();
  tr->add_option("--log", tr_log, "metrics log path");
  tr->add_option("--config", tr_config, "key=value config file");
  tr->add_option("--k", tcfg.k);
  tr->add_option("--aggregation", tr_agg, "average|maximum|product");
  tr->add_option("--encoder", tr_enc, "bilinear|tensor_sketch|fc");
  tr->add_option("--sketch-dim", tcfg.sketch_dim);
  tr->add_option("--fc-dim", tcfg.fc_dim);
  tr->add_option("--lr", tcfg.lr_init);
  tr->add_option("--lr-decay", tcfg.lr_decay);
  tr->add_option("--lr-decay-interval", tcfg.lr_decay_interval);
  tr->add_option("--iters", tcfg.max_iters);
  tr->add_option("--momentum", tcfg.momentum);
  tr->add_option("--weight-decay", tcfg.weight_decay);
  tr->add_option("--batch", tcfg.batch_size);
  tr->add_option("--seed", tcfg.seed);
  tr->add_option("--phase1-iters", tcfg.phase1_iters);

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a model on a dataset");
  std::string ev_model, ev_data, ev_dump;
  std::size_t ev_groups = 0;
  ev->add_option("--model", ev_model)->required();
  ev->add_option("--data", ev_data)->required();
  ev->add_option("--groups", ev_groups, "segment groups per video");
  ev->add_option("--dump-logits", ev_dump, "write per-video logits CSV");

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "run the gradient oracle suites");
  std::size_t gc_trials = 50;
  std::string gc_replay = ".";
  gc->add_option("--trials", gc_trials);
  gc->add_option("--replay-dir", gc_replay, "where to dump failing instances");

  // fuse
  auto* fu = app.add_subcommand("fuse", "late-fuse two per-video logit files");
  std::string fu_a, fu_b, fu_out;
  double fu_wa = 0.5, fu_wb = 0.5;
  fu->add_option("--a", fu_a, "spatial-stream logits CSV")->required();
  fu->add_option("--b", fu_b, "temporal-stream logits CSV")->required();
  fu->add_option("--wa", fu_wa);
  fu->add_option("--wb", fu_wb);
  fu->add_option("--out", fu_out, "write fused logits CSV");

  // bench
  auto* be = app.add_subcommand("bench", "bilinear vs sketch dimensions/timing");
  std::size_t be_c = 1024, be_d = 8196, be_h = 4, be_w = 4;
  be->add_option("--c", be_c, "channel count");
  be->add_option("--d", be_d, "sketch dimension");
  be->add_option("--height", be_h);
  be->add_option("--width", be_w);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      scfg.split = synth_split == "test" ? SplitTag::Test : SplitTag::Train;
      return cmd_synth(scfg, synth_out);
    }
    if (*tr) {
      // precedence: defaults < config file < explicit flags
      TrainConfig final_cfg;
      if (!tr_config.empty()) apply_config_file(final_cfg, tr_config);
      auto passed = [&](const char* name) {
        return tr->get_option(name)->count() > 0;
      };
      if (passed("--k")) final_cfg.k = tcfg.k;
      if (!tr_agg.empty())
        final_cfg.aggregation = aggregation_from_string(tr_agg);
      if (!tr_enc.empty()) final_cfg.encoder = encoder_from_string(tr_enc);
      if (passed("--sketch-dim")) final_cfg.sketch_dim = tcfg.sketch_dim;
      if (passed("--fc-dim")) final_cfg.fc_dim = tcfg.fc_dim;
      if (passed("--lr")) final_cfg.lr_init = tcfg.lr_init;
      if (passed("--lr-decay")) final_cfg.lr_decay = tcfg.lr_decay;
      if (passed("--lr-decay-interval"))
        final_cfg.lr_decay_interval = tcfg.lr_decay_interval;
      if (passed("--iters")) final_cfg.max_iters = tcfg.max_iters;
      if (passed("--momentum")) final_cfg.momentum = tcfg.momentum;
      if (passed("--weight-decay")) final_cfg.weight_decay = tcfg.weight_decay;
      if (passed("--batch")) final_cfg.batch_size = tcfg.batch_size;
      if (passed("--seed")) final_cfg.seed = tcfg.seed;
      if (passed("--phase1-iters")) final_cfg.phase1_iters = tcfg.phase1_iters;
      return cmd_train(tr_data, tr_model, tr_log, final_cfg);
    }
    if (*ev) return cmd_eval(ev_model, ev_data, ev_groups, ev_dump);
    if (*gc) return cmd_gradcheck(gc_trials, gc_replay);
    if (*fu) return cmd_fuse(fu_a, fu_b, fu_wa, fu_wb, fu_out);
    if (*be) return cmd_bench(be_c, be_d, be_h, be_w);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
