#pragma once

#include "tamelab/classify.hpp"
#include "tamelab/config.hpp"
#include "tamelab/entropy.hpp"
#include "tamelab/error.hpp"
#include "tamelab/famtools.hpp"
#include "tamelab/freeset.hpp"
#include "tamelab/generators.hpp"
#include "tamelab/language.hpp"
#include "tamelab/support.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/window.hpp"
