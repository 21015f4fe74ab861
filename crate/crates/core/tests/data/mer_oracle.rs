// Generated by scripts/mer_oracle.py (scipy L-BFGS-B on -Q).
pub const INSTANCES: [Instance; 10] = [
    Instance {
        data: [162.74015182451518, 257.65858905549214, 79.38979461719434, 189.35699785086376, 137.07345512188053, 123.7738930059891, 119.59419388092668, 208.2136159627154],
        model: [68.96408972039441, 149.98713285912083, 108.6660898821824, 133.51005220246498, 76.57121911747296, 61.248123760268584, 128.60251925366623, 101.99421137002211],
        sigma: 28.226182376278704,
        lambda: 341.8564836310643,
        expected: [155.17982438301996, 252.79220729485695, 82.01308328326704, 186.25333403027207, 131.99695648205628, 117.68568330976967, 120.22235826583783, 201.85016289283251],
    },
    Instance {
        data: [246.03174956946683, 59.937670733205614, 261.76197611814365, 48.15655607071691, 63.31972744703297, 134.97855931148314, 325.8539130981591, 52.78236838849599],
        model: [109.44159741965613, 65.68736065089064, 143.37985145515808, 114.63301991063271, 62.81046483754401, 142.21905762097975, 139.79572747590316, 84.56530026771341],
        sigma: 42.71411114140724,
        lambda: 197.58570492328892,
        expected: [220.20709121839147, 62.04483143507202, 242.3716257300177, 67.64098367428005, 63.13145149922677, 136.49570918338262, 297.90819152844483, 63.41396105007408],
    },
    Instance {
        data: [164.16034532619375, 104.0208370717858, 112.41355557195081, 170.1811953559924, 180.5333351564213, 127.3773135902627, 166.24063013102315, 140.82397413348755],
        model: [149.06354506801506, 104.63451815807078, 55.9070700281271, 100.16866089796417, 99.17243336271605, 57.201372024776816, 93.26519954894735, 103.11617915896494],
        sigma: 22.856946171787037,
        lambda: 136.88385913556732,
        expected: [162.813341439625, 104.09915026419853, 103.07406702440802, 162.76953603864175, 172.11663561950456, 116.51585337712497, 158.1758560765254, 136.53791822952707],
    },
    Instance {
        data: [34.95898478532374, 107.21636371065549, 60.28247041816259, 234.52962567132641, 116.44410608189017, 110.19407943873733, 274.8040817239229, 219.54083826265756],
        model: [53.432405580738504, 54.5902436977438, 119.92249479575891, 116.28409302371672, 83.01582369329884, 96.87438750460777, 144.80786103661114, 144.20301143964608],
        sigma: 23.382011145493284,
        lambda: 334.6918617400046,
        expected: [37.30634694638537, 103.06404226699755, 64.34994292304904, 230.07114155808128, 114.35161610196938, 109.39959801444738, 270.71600785614413, 216.87434239924823],
    },
    Instance {
        data: [194.76690522791282, 85.86645982518515, 77.01031384365581, 52.41443480807965, 27.371238918646814, 140.77372834963123, 186.3519885803378, 117.39854934950965],
        model: [79.11130809738872, 121.61059411238341, 71.80891644581138, 100.24526445425454, 82.26309751624855, 93.9179961265049, 127.53304344741002, 92.62863300109231],
        sigma: 24.025525769302135,
        lambda: 29.217336688732516,
        expected: [146.22338235586983, 100.74302631810279, 74.3074513443996, 75.16668869278448, 56.733556418226485, 120.84956212892061, 165.67490836609292, 106.4258764778175],
    },
    Instance {
        data: [96.00972951724835, 57.4081030199227, 160.34050021058448, 106.85249163565703, 138.43351027029507, 158.01438862229386, 106.37916584974919, 184.11394343823144],
        model: [62.41061131724336, 106.18515784882837, 72.56584720734685, 74.51068358628319, 131.1621176799208, 114.49805191653849, 91.04836588886556, 119.69202097457013],
        sigma: 24.27781964107827,
        lambda: 172.3049790013303,
        expected: [90.86921601229277, 64.27677932259611, 150.3709163885506, 102.49003392938518, 137.76178545242485, 153.96217775441892, 104.49442890681588, 178.63496061205043],
    },
    Instance {
        data: [84.33889010504305, 280.6210865064208, 62.507831068534784, 250.6729424056859, 270.96284361022805, 57.77784633509111, 126.16506111747063, 135.8861932137661],
        model: [110.3627771342374, 117.75531874330737, 63.806713753664944, 118.55648688622642, 126.58900115864739, 135.30868164500984, 77.88079581515802, 87.84931469975758],
        sigma: 42.088855921250754,
        lambda: 228.15589006000684,
        expected: [90.50101132244613, 256.4486471300726, 62.935035605069494, 230.08074094420505, 249.84695094607483, 75.78175197315032, 114.2607217328021, 124.94601618748409],
    },
    Instance {
        data: [154.46032818157042, 110.971412506322, 146.2345219508959, 160.7580511171489, 56.89202328530288, 53.86725448273307, 53.487503957472526, 120.59849028869384],
        model: [99.00023556701916, 118.91290428427381, 118.37516939926245, 113.76096944155135, 77.77318875605017, 56.77401695943157, 119.15045595155804, 84.26069702096765],
        sigma: 16.698446225332574,
        lambda: 327.4753725460362,
        expected: [152.97816713109123, 111.19982167621812, 145.53109614099967, 159.60480475197434, 57.897202337275125, 54.035626427051795, 56.05570205940328, 119.41099922168245],
    },
    Instance {
        data: [151.05178970665213, 78.78891238503284, 82.77751142126363, 108.42608741832794, 285.9845170700828, 25.89780834628769, 326.40117209046485, 50.560153386808345],
        model: [110.50416500717901, 134.8114763544935, 146.9607214806377, 108.1952654987249, 140.99060174412324, 76.26236991684972, 139.08998988676075, 96.24694095984904],
        sigma: 38.73107383611453,
        lambda: 287.86513149640865,
        expected: [145.3399517071519, 87.74127904576973, 92.44090146964476, 108.38882953168617, 272.2670068625573, 39.57262834038443, 309.71458058587103, 60.304977126732645],
    },
    Instance {
        data: [144.37958757228438, 43.92553123641908, 155.33623293760624, 72.35324308595976, 96.86408607842166, 107.94289217374649, 114.22975411206612, 131.9037132778471],
        model: [121.01194065591223, 144.17619151999708, 142.2752675294722, 119.93690363623314, 52.835439274466225, 70.78041984494412, 64.52015893447782, 60.8853000659593],
        sigma: 27.37064747673425,
        lambda: 143.9460778663573,
        expected: [141.17183512519162, 61.621128141678525, 153.72492829768905, 80.6218942251614, 86.58206324625745, 100.6199332743017, 104.24265106671847, 118.1095497196364],
    },
];
