#include "util/types.h"

namespace kbmc
{

namespace ty
{

typet boolean()
{
  static typet t = [] {
    auto n = std::make_shared<type_node>();
    n->kind = type_kind::BOOL;
    n->width = 1;
    return n;
  }();
  return t;
}

typet sint(int width)
{
  auto n = std::make_shared<type_node>();
  n->kind = type_kind::SIGNED_INT;
  n->width = width;
  return n;
}

typet uint(int width)
{
  auto n = std::make_shared<type_node>();
  n->kind = type_kind::UNSIGNED_INT;
  n->width = width;
  return n;
}

typet pointer(typet to)
{
  auto n = std::make_shared<type_node>();
  n->kind = type_kind::POINTER;
  n->width = 64;
  n->sub = std::move(to);
  return n;
}

typet array(typet elem, std::int64_t length)
{
  auto n = std::make_shared<type_node>();
  n->kind = type_kind::ARRAY;
  n->sub = std::move(elem);
  n->array_length = length;
  return n;
}

typet struct_ref(const std::string &name)
{
  auto n = std::make_shared<type_node>();
  n->kind = type_kind::STRUCT;
  n->struct_name = name;
  return n;
}

} // namespace ty

bool same_type(const typet &a, const typet &b)
{
  if(a == b)
    return true;
  if(!a || !b)
    return false;
  if(a->kind != b->kind)
    return false;
  switch(a->kind)
  {
  case type_kind::BOOL:
    return true;
  case type_kind::SIGNED_INT:
  case type_kind::UNSIGNED_INT:
    return a->width == b->width;
  case type_kind::POINTER:
    return same_type(a->sub, b->sub);
  case type_kind::ARRAY:
    return a->array_length == b->array_length && same_type(a->sub, b->sub);
  case type_kind::STRUCT:
    return a->struct_name == b->struct_name;
  }
  return false;
}

std::string type_to_string(const typet &t)
{
  if(!t)
    return "<none>";
  switch(t->kind)
  {
  case type_kind::BOOL:
    return "bool";
  case type_kind::SIGNED_INT:
    return "i" + std::to_string(t->width);
  case type_kind::UNSIGNED_INT:
    return "u" + std::to_string(t->width);
  case type_kind::POINTER:
    return type_to_string(t->sub) + "*";
  case type_kind::ARRAY:
    return type_to_string(t->sub) + "[" + std::to_string(t->array_length) + "]";
  case type_kind::STRUCT:
    return "struct " + t->struct_name;
  }
  return "<bad>";
}

int struct_def::field_index(const std::string &fname) const
{
  for(std::size_t i = 0; i < fields.size(); i++)
    if(fields[i].name == fname)
      return static_cast<int>(i);
  return -1;
}

const struct_def *struct_table::find(const std::string &name) const
{
  for(const auto &d : defs)
    if(d.name == name)
      return &d;
  return nullptr;
}

std::int64_t size_of(const typet &t, const struct_table &structs)
{
  switch(t->kind)
  {
  case type_kind::BOOL:
    return 1;
  case type_kind::SIGNED_INT:
  case type_kind::UNSIGNED_INT:
    return t->width / 8;
  case type_kind::POINTER:
    return 8;
  case type_kind::ARRAY:
    return t->array_length * size_of(t->sub, structs);
  case type_kind::STRUCT:
  {
    const struct_def *d = structs.find(t->struct_name);
    if(!d)
      return 0;
    std::int64_t sum = 0;
    for(const auto &f : d->fields)
      sum += size_of(f.type, structs);
    return sum;
  }
  }
  return 0;
}

} // namespace kbmc
