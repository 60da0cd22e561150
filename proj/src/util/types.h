/*******************************************************************\

Module: Type system for the mini-C subset

\*******************************************************************/

#ifndef KBMC_UTIL_TYPES_H
#define KBMC_UTIL_TYPES_H

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace kbmc
{

enum class type_kind
{
  BOOL,
  SIGNED_INT,
  UNSIGNED_INT,
  POINTER,
  ARRAY,
  STRUCT
};

struct type_node;
using typet = std::shared_ptr<const type_node>;

/// Immutable type descriptor. Widths are in bits and restricted to
/// 8/16/32/64 for integers. Arrays carry a static length; structs are
/// referenced by name and resolved against a struct_table.
struct type_node
{
  type_kind kind = type_kind::BOOL;
  int width = 1;                // integer width in bits
  typet sub;                    // pointee / element type
  std::int64_t array_length = 0;
  std::string struct_name;

  bool is_bool() const { return kind == type_kind::BOOL; }
  bool is_signed() const { return kind == type_kind::SIGNED_INT; }
  bool is_unsigned() const { return kind == type_kind::UNSIGNED_INT; }
  bool is_integer() const { return is_signed() || is_unsigned(); }
  bool is_pointer() const { return kind == type_kind::POINTER; }
  bool is_array() const { return kind == type_kind::ARRAY; }
  bool is_struct() const { return kind == type_kind::STRUCT; }
  bool is_scalar() const { return is_bool() || is_integer() || is_pointer(); }
};

namespace ty
{
typet boolean();
typet sint(int width);
typet uint(int width);
typet pointer(typet to);
typet array(typet elem, std::int64_t length);
typet struct_ref(const std::string &name);
} // namespace ty

bool same_type(const typet &a, const typet &b);
std::string type_to_string(const typet &t);

struct struct_field
{
  std::string name;
  typet type; // scalar or pointer only
};

struct struct_def
{
  std::string name;
  std::vector<struct_field> fields;
  int field_index(const std::string &fname) const;
};

struct struct_table
{
  std::vector<struct_def> defs;
  const struct_def *find(const std::string &name) const;
};

/// sizeof in bytes under the checker's packed layout: no padding,
/// pointers are 8 bytes, bool is 1.
std::int64_t size_of(const typet &t, const struct_table &structs);

} // namespace kbmc

#endif
