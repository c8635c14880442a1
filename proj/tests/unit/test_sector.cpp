#include "ququart/sector.hpp"

#include <gtest/gtest.h>

using namespace ququart;

TEST(Sector, VacuumLevelsSpinless) {
  const Mapping m(MappingKind::SpinlessLocal, {2, 2, Boundary::Open});
  EXPECT_EQ(vacuum_levels(m), std::vector<int>(4, 0));
}

TEST(Sector, CalibrationPicksUniqueSign) {
  for (auto kind : {MappingKind::SpinlessLocal, MappingKind::SpinSplit,
                    MappingKind::AuxiliaryParity}) {
    const auto c = calibrate_sector(kind);
    SCOPED_TRACE(std::string(to_string(kind)));
    EXPECT_EQ(c.sign, physical_sector_sign(kind));
  }
  EXPECT_EQ(physical_sector_sign(MappingKind::GeneralizedJW), 1);
}
