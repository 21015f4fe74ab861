// Generated by scripts/wavelet_reference.py (PyWavelets).
pub const SIGNAL: [f64; 21] = [0.0, 1.0326530617130731, 1.3563491899653806, 3.4896280999466223, 1.6049644504677154, -0.5523496830688595, 0.9852726827592373, 0.9526421621270025, 2.5062000863830356, 8.15044170145305, 10.970959796156368, 13.064504701631002, 16.963796724264846, 16.85729508704806, 16.50056261224422, 19.86091272008499, 21.66246681254605, 25.045588663288896, 32.50086914166341, 37.10870928658981, 40.97182206708461];
pub const DB2_SYMMETRIC_A2: [f64; 7] = [0.6404801197679063, 1.6201378502983137, 1.314375156673583, 8.70467331896052, 29.698904700387267, 44.82490116859162, 79.59897487576025];
pub const DB2_SYMMETRIC_D2: [f64; 7] = [-0.21504032393651232, 2.944477744785109, -4.206625099774739, 1.5453079071653777, -2.015542977174875, 3.2613453738249722, 4.625274639718495];
pub const DB2_SYMMETRIC_D1: [f64; 12] = [-0.6323682706299543, -0.7822155935714323, 0.6516401003088859, 0.2802139401784876, -2.180916401397672, 0.7165178018352765, 1.7009689031374797, -1.7628307792931062, -0.5621155237701445, 0.8482319746925362, 1.9621150149356001, 0.8595992779098411];
pub const DB2_ZERO_A2: [f64; 7] = [-0.12264402136154089, 1.3792682444917668, 1.314375156673583, 8.70467331896052, 29.698904700387267, 50.98077595428527, 43.56129132873741];
pub const DB2_ZERO_D2: [f64; 7] = [-0.45771371896583335, 3.0090185611421765, -4.206625099774739, 1.5453079071653777, -2.015542977174875, 26.23538283906583, -11.672212832792056];
pub const DB2_ZERO_D1: [f64; 12] = [-0.4987331309525682, -0.7822155935714323, 0.6516401003088859, 0.2802139401784876, -2.180916401397672, 0.7165178018352765, 1.7009689031374797, -1.7628307792931062, -0.5621155237701445, 0.8482319746925362, 21.749985557294295, -5.302143931756613];
pub const DB2_PERIODIC_A2: [f64; 6] = [46.37914754997904, 3.1055733623151878, 2.933007811429817, 26.730367540044995, 37.29265669223243, 82.96352920681187];
pub const DB2_PERIODIC_D2: [f64; 6] = [-11.885065389991953, -1.9658142409853472, 0.16659181212996071, -1.083775951890512, -3.840431950946415, 22.529262008812537];
pub const DB2_PERIODIC_D1: [f64; 11] = [-5.093379165555772, 1.7063399995637565, -1.749233726651956, -0.5628645158178662, 0.8343803139745731, -0.7780316347799061, 0.6392400592397744, 0.271814782282231, -2.1713715220693506, 0.7281615914690573, 20.287794122844197];
pub const SYM4_SYMMETRIC_A2: [f64; 10] = [1.4287892836163014, 0.7182279452231508, 3.03397306118129, 0.7408245087857144, 22.501186844669416, 34.10575084095829, 68.41074093287675, 67.99173250187168, 55.92228782778076, 79.93659340724032];
pub const SYM4_SYMMETRIC_D2: [f64; 10] = [-1.8936607197215345, -0.41074246170518514, 1.1856055153554508, -0.2930737291416732, 1.5768547488382936, -2.583340225492352, 4.404147618019968, -7.678576932572479, 9.121526663971657, -6.461197674426503];
pub const SYM4_SYMMETRIC_D1: [f64; 14] = [1.0100752986552042, 0.26258674460635345, -0.16041499308040008, -1.7190695772797981, 1.337028623538167, 0.5825620754364689, -1.543077087870555, 0.8879837762024261, 0.2539238465387187, -1.2057476421834572, 1.513849197189316, 0.20228482390058034, -0.6408789008102953, -0.7189210273695354];
pub const SYM4_ZERO_A2: [f64; 10] = [-0.013537358102381141, -0.1882588190293772, 3.0968631939123163, 0.7166559986135386, 22.500114611861676, 35.28860019335982, 66.80492762522968, 5.6418577491729165, 1.7983799846272108, -0.1289584974709078];
pub const SYM4_ZERO_D2: [f64; 10] = [-0.005757428056468291, -0.10015237198731453, 0.7396010776983983, -0.24504215261459075, 1.5793758744772333, -2.0802752997818676, 5.476247863637321, -10.526005433188342, -5.286347973640886, 0.3032182675124332];
pub const SYM4_ZERO_D1: [f64; 14] = [-0.033275283496653076, -0.027082652665084625, -0.08217529573037752, -1.7190695772797981, 1.337028623538167, 0.5825620754364689, -1.543077087870555, 0.8879837762024261, 0.2539238465387187, -1.2057476421834572, 2.834088341587922, -2.3479249280520484, 19.025628105657944, -3.1042593851315874];
pub const SYM4_PERIODIC_A2: [f64; 6] = [-0.1998021542194801, 5.0581801232235755, 27.14091665806871, 40.15375788835058, 73.79980143567535, 39.54775516359767];
pub const SYM4_PERIODIC_D2: [f64; 6] = [20.568459361606475, -0.13627908403925604, -1.86761705775766, 0.8264144351229158, 3.4921792618465357, 5.818904364274995];
pub const SYM4_PERIODIC_D1: [f64; 11] = [19.137457211913187, -2.5066723192831106, 0.24896042682039093, -1.207421867099319, 1.335686142574535, 0.07045800994158345, -1.7158163366755372, 1.3413678485137361, 0.5807838861445651, 0.08006317652557282, -3.2520158750533774];
