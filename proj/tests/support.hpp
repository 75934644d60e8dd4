#pragma once

// doctest printers for simulator types, so failed checks show values.

#include "cbfsim/time.hpp"
#include "cbfsim/types.hpp"

#include <doctest.h>

#include <optional>
#include <string>
#include <type_traits>

namespace doctest
{

template <>
struct StringMaker<cbfsim::Duration>
{
    static String convert(cbfsim::Duration d) { return (std::to_string(d.count()) + " us").c_str(); }
};

template <>
struct StringMaker<cbfsim::SimTime>
{
    static String convert(cbfsim::SimTime t) { return ("t=" + std::to_string(cbfsim::toMicros(t)) + " us").c_str(); }
};

template <typename T>
struct StringMaker<std::optional<T>>
{
    static String convert(const std::optional<T>& v) { return v ? StringMaker<T>::convert(*v) : String("nullopt"); }
};

template <typename E>
    requires std::is_enum_v<E>
struct StringMaker<E>
{
    static String convert(E e) { return std::to_string(static_cast<long long>(e)).c_str(); }
};

} // namespace doctest
