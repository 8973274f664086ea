#pragma once

#include "altbd/bilateral.hpp"
#include "altbd/errors.hpp"
#include "altbd/oracle.hpp"
#include "altbd/rates.hpp"
#include "altbd/reflecting.hpp"
#include "altbd/specfun.hpp"
