#include "pzeta/presentation.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace pzeta {

namespace {

using nlohmann::json;

std::vector<unsigned> parse_exponents(const json& arr, int coord,
                                      const char* which) {
  if (!arr.is_array())
    throw InvalidPresentationError("presentation: exponents must be an array");
  std::vector<unsigned> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw InvalidPresentationError(
          "presentation: exponents must be nonnegative integers");
    out.push_back(static_cast<unsigned>(v.get<long long>()));
  }
  // Triangularity: only coordinates below `coord` may appear.
  for (std::size_t j = 0; j < out.size(); ++j)
    if (out[j] != 0 && static_cast<int>(j) >= coord)
      throw InvalidPresentationError(
          std::string("presentation: ") + which +
          " exponent on coordinate >= its own polynomial");
  return out;
}

}  // namespace

MalcevPresentation MalcevPresentation::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidPresentationError(std::string("presentation: bad JSON: ") +
                                   e.what());
  }
  MalcevPresentation pres;
  if (!doc.is_object()) throw InvalidPresentationError("presentation: not an object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw InvalidPresentationError("presentation: missing name");
  pres.name_ = doc["name"].get<std::string>();
  if (!doc.contains("rank") || !doc["rank"].is_number_integer())
    throw InvalidPresentationError("presentation: missing rank");
  pres.rank_ = doc["rank"].get<int>();
  if (pres.rank_ < 1) throw InvalidPresentationError("presentation: rank must be >= 1");
  if (!doc.contains("class") || !doc["class"].is_number_integer())
    throw InvalidPresentationError("presentation: missing class");
  pres.class_ = doc["class"].get<int>();
  if (pres.class_ < 1)
    throw InvalidPresentationError("presentation: class must be >= 1");

  if (!doc.contains("products") || !doc["products"].is_array() ||
      doc["products"].size() != static_cast<std::size_t>(pres.rank_))
    throw InvalidPresentationError(
        "presentation: products must list one polynomial per coordinate");
  for (int i = 0; i < pres.rank_; ++i) {
    const auto& poly = doc["products"][i];
    if (!poly.is_array())
      throw InvalidPresentationError("presentation: polynomial must be an array");
    if (i == 0 && !poly.empty())
      throw InvalidPresentationError(
          "presentation: coordinate 1 must have an empty product list");
    std::vector<MonomialTerm> terms;
    for (const auto& t : poly) {
      if (!t.is_array() || t.size() != 3)
        throw InvalidPresentationError(
            "presentation: term must be [coeff, [x-exps], [y-exps]]");
      MonomialTerm term;
      if (t[0].is_number_integer())
        term.coeff = Int(static_cast<long>(t[0].get<long long>()));
      else if (t[0].is_string())
        term.coeff = Int(t[0].get<std::string>());
      else
        throw InvalidPresentationError("presentation: coefficient must be integer");
      term.x_exps = parse_exponents(t[1], i, "x");
      term.y_exps = parse_exponents(t[2], i, "y");
      bool has_x = false, has_y = false;
      for (unsigned e : term.x_exps) has_x |= e != 0;
      for (unsigned e : term.y_exps) has_y |= e != 0;
      // Identity law: P_i(0,y) = P_i(x,0) = 0 forces every monomial to touch
      // both argument blocks.
      if (!has_x || !has_y)
        throw InvalidPresentationError(
            "presentation: monomial must involve both x and y coordinates");
      terms.push_back(std::move(term));
    }
    pres.products_.push_back(std::move(terms));
  }

  if (doc.contains("relators")) {
    if (!doc["relators"].is_array())
      throw InvalidPresentationError("presentation: relators must be an array");
    for (const auto& r : doc["relators"]) {
      if (!r.is_array() || r.size() != static_cast<std::size_t>(pres.rank_))
        throw InvalidPresentationError(
            "presentation: relator must be a coordinate vector of length rank");
      std::vector<Int> rel;
      for (const auto& v : r) {
        if (v.is_number_integer())
          rel.push_back(Int(static_cast<long>(v.get<long long>())));
        else if (v.is_string())
          rel.push_back(Int(v.get<std::string>()));
        else
          throw InvalidPresentationError("presentation: relator entries must be integers");
      }
      pres.relators_.push_back(std::move(rel));
    }
  }

  pres.validate_associativity();
  return pres;
}

MalcevPresentation MalcevPresentation::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

Int MalcevPresentation::eval_product_polynomial(int coord,
                                                const std::vector<Int>& a,
                                                const std::vector<Int>& b) const {
  Int acc = 0;
  for (const auto& term : products_[coord]) {
    Int m = term.coeff;
    for (std::size_t j = 0; j < term.x_exps.size() && m != 0; ++j)
      for (unsigned e = 0; e < term.x_exps[j]; ++e) m *= a[j];
    for (std::size_t j = 0; j < term.y_exps.size() && m != 0; ++j)
      for (unsigned e = 0; e < term.y_exps[j]; ++e) m *= b[j];
    acc += m;
  }
  return acc;
}

std::vector<Int> MalcevPresentation::multiply(const std::vector<Int>& a,
                                              const std::vector<Int>& b) const {
  std::vector<Int> z(rank_);
  for (int i = 0; i < rank_; ++i)
    z[i] = a[i] + b[i] + eval_product_polynomial(i, a, b);
  return z;
}

std::vector<Int> MalcevPresentation::inverse(const std::vector<Int>& a) const {
  // Triangularity makes coordinate i of z*a linear in z_i once z_1..z_{i-1}
  // are known.
  std::vector<Int> z(rank_, Int(0));
  for (int i = 0; i < rank_; ++i)
    z[i] = -a[i] - eval_product_polynomial(i, z, a);
  return z;
}

void MalcevPresentation::validate_associativity(unsigned samples) const {
  std::mt19937_64 rng(0x5eed0001);
  std::uniform_int_distribution<long> dist(-50, 50);
  for (unsigned s = 0; s < samples; ++s) {
    std::vector<Int> a(rank_), b(rank_), c(rank_);
    for (int i = 0; i < rank_; ++i) {
      a[i] = dist(rng);
      b[i] = dist(rng);
      c[i] = dist(rng);
    }
    if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
      throw InvalidPresentationError("presentation '" + name_ +
                                     "': product law is not associative");
    std::vector<Int> inv = inverse(a);
    if (multiply(a, inv) != identity() || multiply(inv, a) != identity())
      throw InvalidPresentationError("presentation '" + name_ +
                                     "': inversion failed");
  }
}

std::string MalcevPresentation::canonical_json() const {
  nlohmann::ordered_json doc;
  doc["name"] = name_;
  doc["rank"] = rank_;
  doc["class"] = class_;
  auto products = nlohmann::ordered_json::array();
  for (const auto& poly : products_) {
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : poly) {
      auto xs = nlohmann::ordered_json::array();
      for (unsigned e : t.x_exps) xs.push_back(e);
      auto ys = nlohmann::ordered_json::array();
      for (unsigned e : t.y_exps) ys.push_back(e);
      terms.push_back({t.coeff.get_str(), xs, ys});
    }
    products.push_back(terms);
  }
  doc["products"] = products;
  auto rels = nlohmann::ordered_json::array();
  for (const auto& r : relators_) {
    auto rel = nlohmann::ordered_json::array();
    for (const auto& v : r) rel.push_back(v.get_str());
    rels.push_back(rel);
  }
  doc["relators"] = rels;
  return doc.dump();
}

std::uint64_t MalcevPresentation::fingerprint() const {
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace pzeta
