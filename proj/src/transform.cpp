#include "sievebands/transform.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sievebands/arith.hpp"

namespace sievebands {

template <class T>
EratosthenesTransform<T>::EratosthenesTransform(std::vector<T> coeffs, std::string label)
    : coeffs_(std::move(coeffs)), label_(std::move(label)) {
  if (coeffs_.empty()) throw std::invalid_argument("EratosthenesTransform: range must be >= 1");
  if constexpr (std::is_same_v<T, double>) {
    for (const double c : coeffs_)
      if (!std::isfinite(c)) throw std::invalid_argument("EratosthenesTransform: non-finite coefficient");
  }
}

template <class T>
double EratosthenesTransform<T>::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::fabs(ScalarTraits<T>::to_double(c)));
  return m;
}

template <class T>
RealTransform EratosthenesTransform<T>::to_real() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(ScalarTraits<T>::to_double(c));
  return RealTransform(std::move(out), label_);
}

template class EratosthenesTransform<Rational>;
template class EratosthenesTransform<double>;

template <class T>
EratosthenesTransform<T> transform_unit() {
  return EratosthenesTransform<T>({ScalarTraits<T>::from_int(1)}, "unit");
}

template <class T>
EratosthenesTransform<T> transform_moebius(std::int64_t range) {
  if (range < 1) throw std::invalid_argument("transform_moebius: Q must be >= 1");
  const auto mu = arith::moebius_table(range);
  std::vector<T> coeffs;
  coeffs.reserve(static_cast<std::size_t>(range));
  for (std::int64_t d = 1; d <= range; ++d) coeffs.push_back(ScalarTraits<T>::from_int(mu(d)));
  return EratosthenesTransform<T>(std::move(coeffs), "moebius_" + std::to_string(range));
}

RealTransform transform_moebius_log(std::int64_t range) {
  if (range < 1) throw std::invalid_argument("transform_moebius_log: Q must be >= 1");
  const auto mu = arith::moebius_table(range);
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(range));
  for (std::int64_t d = 1; d <= range; ++d)
    coeffs.push_back(mu(d) == 0 ? 0.0 : mu(d) * std::log(static_cast<double>(d)));
  return RealTransform(std::move(coeffs), "moebius_log_" + std::to_string(range));
}

RealTransform transform_lambda_r(std::int64_t r) {
  if (r < 1) throw std::invalid_argument("transform_lambda_r: R must be >= 1");
  const auto mu = arith::moebius_table(r);
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(r));
  for (std::int64_t d = 1; d <= r; ++d)
    coeffs.push_back(mu(d) == 0 ? 0.0
                                : mu(d) * std::log(static_cast<double>(r) / static_cast<double>(d)));
  return RealTransform(std::move(coeffs), "lambda_r_" + std::to_string(r));
}

template <class T>
EratosthenesTransform<T> transform_custom(std::vector<T> coeffs, std::string label) {
  return EratosthenesTransform<T>(std::move(coeffs), std::move(label));
}

template <class T>
EratosthenesTransform<T> transform_random(std::int64_t range, SplitMix64& rng) {
  if (range < 1) throw std::invalid_argument("transform_random: Q must be >= 1");
  std::vector<T> coeffs;
  coeffs.reserve(static_cast<std::size_t>(range));
  for (std::int64_t d = 1; d <= range; ++d) coeffs.push_back(ScalarTraits<T>::from_int(rng.uniform_int(-3, 3)));
  return EratosthenesTransform<T>(std::move(coeffs), "random_" + std::to_string(range));
}

RealTransform transform_random_real(std::int64_t range, SplitMix64& rng) {
  if (range < 1) throw std::invalid_argument("transform_random_real: Q must be >= 1");
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(range));
  for (std::int64_t d = 1; d <= range; ++d) coeffs.push_back(rng.uniform_real(-1.0, 1.0));
  return RealTransform(std::move(coeffs), "random_real_" + std::to_string(range));
}

template EratosthenesTransform<Rational> transform_unit<Rational>();
template EratosthenesTransform<double> transform_unit<double>();
template EratosthenesTransform<Rational> transform_moebius<Rational>(std::int64_t);
template EratosthenesTransform<double> transform_moebius<double>(std::int64_t);
template EratosthenesTransform<Rational> transform_custom<Rational>(std::vector<Rational>, std::string);
template EratosthenesTransform<double> transform_custom<double>(std::vector<double>, std::string);
template EratosthenesTransform<Rational> transform_random<Rational>(std::int64_t, SplitMix64&);
template EratosthenesTransform<double> transform_random<double>(std::int64_t, SplitMix64&);

AnyTransform transform_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("transform JSON: expected an object");
  if (!doc.contains("coeffs") || !doc["coeffs"].is_array())
    throw std::invalid_argument("transform JSON: missing 'coeffs' array");
  const auto& coeffs = doc["coeffs"];
  const Backend backend = parse_backend(doc.value("backend", std::string("exact")));
  const std::string label = doc.value("label", std::string("custom"));
  if (doc.contains("Q")) {
    if (!doc["Q"].is_number_integer() || doc["Q"].get<std::int64_t>() != static_cast<std::int64_t>(coeffs.size()))
      throw std::invalid_argument("transform JSON: 'Q' must equal the number of coefficients");
  }
  if (backend == Backend::exact) {
    std::vector<Rational> values;
    for (const auto& c : coeffs) {
      if (c.is_string()) values.push_back(Rational::parse(c.get<std::string>()));
      else if (c.is_number_integer()) values.emplace_back(static_cast<long>(c.get<std::int64_t>()));
      else if (c.is_number()) values.push_back(Rational::from_double(c.get<double>()));
      else throw std::invalid_argument("transform JSON: coefficient must be a string or number");
    }
    return ExactTransform(std::move(values), label);
  }
  std::vector<double> values;
  for (const auto& c : coeffs) {
    if (c.is_string()) values.push_back(Rational::parse(c.get<std::string>()).to_double());
    else if (c.is_number()) values.push_back(c.get<double>());
    else throw std::invalid_argument("transform JSON: coefficient must be a string or number");
  }
  return RealTransform(std::move(values), label);
}

AnyTransform load_transform(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open transform file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed transform JSON in " + path.string() + ": " + e.what());
  }
  return transform_from_json(doc);
}

nlohmann::json transform_to_json(const AnyTransform& t) {
  return std::visit(
      [](const auto& tr) {
        nlohmann::json doc;
        doc["Q"] = tr.range();
        doc["backend"] = std::string(to_string(tr.backend()));
        doc["label"] = tr.label();
        auto coeffs = nlohmann::json::array();
        for (const auto& c : tr.coefficients()) {
          if constexpr (std::is_same_v<std::decay_t<decltype(c)>, Rational>) coeffs.push_back(c.to_string());
          else coeffs.push_back(c);
        }
        doc["coeffs"] = std::move(coeffs);
        return doc;
      },
      t);
}

RealTransform to_real(const AnyTransform& t) {
  return std::visit([](const auto& tr) { return tr.to_real(); }, t);
}

Backend backend_of(const AnyTransform& t) {
  return std::visit([](const auto& tr) { return tr.backend(); }, t);
}

}  // namespace sievebands
