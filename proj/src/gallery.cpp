#include "liftlim/gallery.hpp"

#include "liftlim/errors.hpp"

namespace liftlim {

namespace {

long param(const GalleryParams& params, const std::string& key, long fallback, long lo, long hi) {
  for (const auto& [k, v] : params)
    if (k != key) throw ParamOutOfRange("unknown parameter '" + k + "'");
  const auto it = params.find(key);
  const long v = it == params.end() ? fallback : it->second;
  if (v < lo || v > hi)
    throw ParamOutOfRange(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  return v;
}

GroupRef integers() { return make_group("Z", Backend::Abelian, {"a"}); }

GroupHom scalar_hom(const GroupRef& g, long k) {
  return GroupHom(g->alphabet, g->alphabet, {Word::generator(g->alphabet, 0, Integer(k))});
}

/// Z, bonding id, thread G_0 = Z evolving by x -> p x.
GalleryEntry solenoid(const std::string& name, long p, GalleryParams params) {
  const GroupRef z = integers();
  const GroupHom id = GroupHom::identity(z->alphabet);
  Thread th;
  th.tail_start = full_subgroup(*z);
  th.tail_step = scalar_hom(z, p);
  Tower t({}, {}, std::move(th), Tail{z, id, scalar_hom(z, p)});
  BaseModel m{z, {}, id};
  return {name, std::move(params), std::move(t), std::move(m),
          {{"check", "ok"}, {"classify", "StrictLifting"}, {"fiber", "Uncountable"}, {"pi0", "Uncountable"},
           {"density", "Dense"}}};
}

std::vector<std::string> names(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

/// Projection from rank `from` onto the first `to` coordinates.
GroupHom projection(const GroupRef& src, const GroupRef& dst) {
  std::vector<Word> images;
  for (std::size_t g = 0; g < src->rank(); ++g)
    images.push_back(g < dst->rank() ? Word::generator(dst->alphabet, g) : Word(dst->alphabet));
  return GroupHom(src->alphabet, dst->alphabet, std::move(images));
}

GalleryEntry hawaiian(long n, GalleryParams params) {
  std::vector<GroupRef> groups;
  for (long k = 0; k <= n; ++k) groups.push_back(make_group("F" + std::to_string(k), Backend::Free, names("a", k)));
  std::vector<GroupHom> bondings;
  Thread th;
  for (long k = 0; k <= n; ++k) {
    th.prefix.push_back(trivial_subgroup(*groups[k]));
    if (k < n) bondings.push_back(projection(groups[k + 1], groups[k]));
  }
  BaseModel m{groups[n], {}, std::nullopt};
  for (long k = 0; k <= n; ++k) m.stage_maps.push_back(projection(groups[n], groups[k]));
  Tower t(groups, std::move(bondings), std::move(th));
  return {"hawaiian", std::move(params), std::move(t), std::move(m),
          {{"check", "ok"}, {"classify", "Covering(" + std::to_string(n) + ")"}, {"pi0", "Trivial"}, {"density", "Dense"}}};
}

GalleryEntry product_tower(long n, GalleryParams params) {
  std::vector<GroupRef> groups;
  for (long k = 1; k <= n; ++k) groups.push_back(make_group("Z" + std::to_string(k), Backend::Abelian, names("e", k)));
  std::vector<GroupHom> bondings;
  Thread th;
  for (long k = 0; k < n; ++k) {
    th.prefix.push_back(trivial_subgroup(*groups[k]));
    if (k + 1 < n) bondings.push_back(projection(groups[k + 1], groups[k]));
  }
  BaseModel m{groups[n - 1], {}, std::nullopt};
  for (long k = 0; k < n; ++k) m.stage_maps.push_back(projection(groups[n - 1], groups[k]));
  Tower t(groups, std::move(bondings), std::move(th));
  return {"product-tower", std::move(params), std::move(t), std::move(m),
          {{"check", "ok"}, {"classify", "Covering(" + std::to_string(n - 1) + ")"}, {"pi0", "Trivial"},
           {"density", "Dense"}}};
}

GalleryEntry constant_cover(long mval, GalleryParams params) {
  const GroupRef z = integers();
  const GroupHom id = GroupHom::identity(z->alphabet);
  Thread th;
  th.tail_start = Subgroup(*z, {Word::generator(z->alphabet, 0, Integer(mval))});
  th.tail_step = id;
  Tower t({}, {}, std::move(th), Tail{z, id, id});
  BaseModel m{z, {}, id};
  return {"constant-cover", std::move(params), std::move(t), std::move(m),
          {{"check", "ok"}, {"classify", "Covering(0)"}, {"fiber", "Finite(" + std::to_string(mval) + ")"},
           {"pi0", "Trivial"}, {"density", "Dense"}}};
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"constant-cover", "dyadic-solenoid", "hawaiian", "p-solenoid", "product-tower", "warsawonoid"};
}

GalleryEntry make_gallery(const std::string& name, const GalleryParams& params) {
  if (name == "p-solenoid") return solenoid(name, param(params, "p", 2, 2, 1000), params);
  if (name == "dyadic-solenoid" || name == "warsawonoid") {
    if (!params.empty()) throw ParamOutOfRange(name + " takes no parameters");
    return solenoid(name, 2, params);
  }
  if (name == "hawaiian") return hawaiian(param(params, "n", 4, 1, 12), params);
  if (name == "product-tower") return product_tower(param(params, "n", 3, 1, 12), params);
  if (name == "constant-cover") return constant_cover(param(params, "m", 2, 1, 1000), params);
  throw UnknownEntry(name);
}

}  // namespace liftlim
