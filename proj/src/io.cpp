#include "gcnn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gcnn/errors.hpp"
#include "gcnn/targets.hpp"

namespace gcnn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_row(std::string& out, const Eigen::Ref<const Vec>& row) {
  for (Index i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += fmt(row(i));
  }
  out += '\n';
}

double read_double(std::istream& in, const char* what) {
  double v;
  if (!(in >> v)) throw config_error(std::string("model file: missing ") + what);
  return v;
}

long long read_count(std::istream& in, const char* what) {
  long long v;
  if (!(in >> v) || v < 0) throw config_error(std::string("model file: bad ") + what);
  return v;
}

std::string target_name_of(const ConstraintTarget& target) {
  return std::visit([](const auto& t) { return t.name; }, target);
}

}  // namespace

std::string serialize(const RbfModel& model) {
  if (!model.fitted()) throw std::invalid_argument("serialize: model is not fitted");
  std::string out = std::to_string(model.num_centers()) + " " + std::to_string(model.dim()) + "\n";
  for (Index j = 0; j < model.num_centers(); ++j)
    append_row(out, model.centers.row(j).transpose());
  append_row(out, model.widths);
  append_row(out, model.weights);
  return out;
}

std::string serialize(const GcnnModel& model) {
  std::string out = std::string("gcnn ") + scheme_name(model.scheme) + " " +
                    std::to_string(model.specs.size()) + "\n";
  out += serialize(model.base);
  for (const auto& spec : model.specs) {
    out += "gamma " + fmt(spec.gamma) + "\n";
    if (const auto* pl = std::get_if<PointList>(&spec.set)) {
      out += "set point-list " + std::to_string(pl->points.rows()) + " " +
             std::to_string(pl->points.cols()) + "\n";
      for (Index i = 0; i < pl->points.rows(); ++i)
        append_row(out, pl->points.row(i).transpose());
    } else if (const auto* ap = std::get_if<AxisPlane>(&spec.set)) {
      out += "set axis-plane " + std::to_string(ap->axis) + " " + fmt(ap->level) + "\n";
    } else {
      throw std::invalid_argument("serialize: predicate regions are not serializable");
    }
    const std::string name = target_name_of(spec.target);
    if (!targets::is_registered(name))
      throw std::invalid_argument("serialize: target is not a registered built-in");
    out += "target " + name + "\n";
  }
  return out;
}

RbfModel parse_rbf_model(std::istream& in) {
  const long long m = read_count(in, "center count");
  const long long d = read_count(in, "dimension");
  if (m < 1 || d < 1) throw config_error("model file: center count and dimension must be >= 1");
  RbfModel model;
  model.centers.resize(m, d);
  for (long long j = 0; j < m; ++j)
    for (long long k = 0; k < d; ++k) model.centers(j, k) = read_double(in, "center coordinate");
  model.widths.resize(m);
  for (long long j = 0; j < m; ++j) model.widths(j) = read_double(in, "width");
  model.weights.resize(m + 1);
  for (long long j = 0; j <= m; ++j) model.weights(j) = read_double(in, "weight");
  if (!model.centers.allFinite() || !model.widths.allFinite() || !model.weights.allFinite())
    throw config_error("model file: non-finite entries");
  if ((model.widths.array() <= 0.0).any()) throw config_error("model file: non-positive width");
  return model;
}

GcnnModel parse_gcnn_model(std::istream& stream) {
  const std::string content((std::istreambuf_iterator<char>(stream)),
                            std::istreambuf_iterator<char>());
  std::istringstream in(content);
  std::string tag;
  if (!(in >> tag)) throw config_error("model file: empty");
  GcnnModel model;
  if (tag != "gcnn") {  // plain rbf file
    std::istringstream whole(content);
    model.base = parse_rbf_model(whole);
    model.scheme = Scheme::Unconstrained;
    return model;
  }
  std::string scheme;
  if (!(in >> scheme)) throw config_error("model file: missing scheme");
  model.scheme = [&] {
    try {
      return scheme_from_name(scheme);
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }();
  const long long nspecs = read_count(in, "constraint count");
  model.base = parse_rbf_model(in);
  for (long long s = 0; s < nspecs; ++s) {
    ConstraintSpec spec;
    std::string key;
    if (!(in >> key) || key != "gamma") throw config_error("model file: expected gamma");
    spec.gamma = read_double(in, "gamma");
    if (!(spec.gamma > 0.0)) throw config_error("model file: gamma must be positive");
    if (!(in >> key) || key != "set") throw config_error("model file: expected set");
    std::string kind;
    if (!(in >> kind)) throw config_error("model file: missing set kind");
    if (kind == "point-list") {
      const long long r = read_count(in, "point count");
      const long long d = read_count(in, "point dimension");
      if (r < 1 || d < 1) throw config_error("model file: bad point list shape");
      PointList pl;
      pl.points.resize(r, d);
      for (long long i = 0; i < r; ++i)
        for (long long k = 0; k < d; ++k) pl.points(i, k) = read_double(in, "constraint point");
      spec.set = std::move(pl);
    } else if (kind == "axis-plane") {
      AxisPlane ap;
      ap.axis = read_count(in, "plane axis");
      ap.level = read_double(in, "plane level");
      spec.set = ap;
    } else {
      throw config_error("model file: unknown set kind " + kind);
    }
    if (!(in >> key) || key != "target") throw config_error("model file: expected target");
    std::string name;
    if (!(in >> name)) throw config_error("model file: missing target name");
    spec.target = targets::by_name(name);
    model.specs.push_back(std::move(spec));
  }
  return model;
}

void save_model(const std::string& path, const GcnnModel& model) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open model file for writing: " + path);
  out << serialize(model);
}

GcnnModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open model file: " + path);
  return parse_gcnn_model(in);
}

}  // namespace gcnn
