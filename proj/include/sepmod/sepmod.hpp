#ifndef SEPMOD_SEPMOD_HPP
#define SEPMOD_SEPMOD_HPP

#include <sepmod/errors.hpp>
#include <sepmod/tolerance.hpp>
#include <sepmod/matrix.hpp>
#include <sepmod/subspace.hpp>
#include <sepmod/pairs.hpp>
#include <sepmod/idempotents.hpp>
#include <sepmod/algebra.hpp>
#include <sepmod/submodule.hpp>
#include <sepmod/localization.hpp>
#include <sepmod/local_angle.hpp>
#include <sepmod/studies.hpp>
#include <sepmod/io.hpp>

#endif // SEPMOD_SEPMOD_HPP
