// Generated by tests/oracle/bounds_oracle.py; do not edit.
pub struct Pinned {
    pub inp: [f64; 15],
    pub c: f64,
    pub ir: [f64; 4],
    pub ir_q: [f64; 4],
    pub v: f64,
    pub v_q: f64,
    pub quant: [f64; 2],
    pub fmg: [f64; 3],
    pub n: usize,
    pub sigma: f64,
}

// inp: kappa, kappa_underbar, kappa_ptp, m_a, m_p, rho, eps, eps_bar, eps_dot,
// eps_check, eps_dot_1, zeta_dot, m, vartheta, sigma
pub const PINNED: [Pinned; 20] = [
    Pinned {
        inp: [66.98, 130.7, 2.81, 7.0, 7.0, 0.191, 1.1368683772161603e-13, 6.776263578034403e-21, 4.656612873077393e-10, 5.421010862427522e-20, 0.125, 2.0, 2.0, 3.93, 3.62],
        c: 4.15,
        ir: [1.2858593024528865e-12, 9.304358174061856e-13, 0.19100000000128586, 1.15010607837783e-12],
        ir_q: [1.2858682694011645e-12, 9.304447843544635e-13, 0.19100000000128586, 1.1501171623682847e-12],
        quant: [138.88413098624403, 7.528923826952357e-18],
        fmg: [4.150000000000001, 8.300000000000006, 1.431227914690068e-17],
        v: 2.2835546416010353e-05,
        v_q: 2.8137277408725716e-05,
        n: 3,
        sigma: 473.13400022032016,
    },
    Pinned {
        inp: [96550.0, 106300.0, 5.52, 9.0, 5.0, 0.54, 9.094947017729282e-13, 2.117582368135751e-22, 1.1920928955078125e-07, 6.617444900424222e-24, 0.0009765625, 1.0, 2.0, 3.66, 2.79],
        c: 1.91,
        ir: [5.878139367739852e-10, 2.8260301668514933e-10, 0.5400000005878139, 6.143543848832074e-10],
        ir_q: [5.878139378604407e-10, 2.8260301777160484e-10, 0.5400000005878139, 6.143543872450673e-10],
        quant: [106610.72495876579, 7.054905982089139e-19],
        fmg: [1.9100000000000046, 3.8200000000000047, 6.604402890916354e-20],
        v: 0.1138547502581644,
        v_q: 0.12465286135397596,
        n: 6,
        sigma: 296577.03535473347,
    },
    Pinned {
        inp: [20.98, 44.62, 2.47, 5.0, 7.0, 0.158, 3.552713678800501e-15, 1.1102230246251565e-16, 1.52587890625e-05, 6.938893903907228e-18, 0.0625, 1.0, 2.0, 2.98, 2.59],
        c: 2.09,
        ir: [5.3041991388655305e-14, 4.789977873541623e-14, 0.15800000000005304, 5.688809826059293e-14],
        ir_q: [5.343732831219773e-14, 4.8295115658958646e-14, 0.15800000000005343, 5.735761954746047e-14],
        quant: [49.20039299623953, 3.4139630703144636e-16],
        fmg: [2.090000000000016, 4.180000000000135, 1.0212031894746746e-15],
        v: 0.1242583278650938,
        v_q: 0.14992598706343382,
        n: 2,
        sigma: 115.56756339416502,
    },
    Pinned {
        inp: [24.07, 70.82, 2.02, 9.0, 4.0, 0.151, 8.881784197001252e-16, 6.776263578034403e-21, 3.637978807091713e-12, 4.547473508864641e-13, 0.125, 1.0, 2.0, 1.84, 2.62],
        c: 2.4,
        ir: [5.678791933869309e-15, 4.362824309307576e-15, 0.15100000000000569, 5.138780105191525e-15],
        ir_q: [3.9641804659046045e-11, 3.9640488691421484e-11, 0.1510000000396418, 4.669079940314769e-11],
        quant: [75.7261186312532, 3.443625184047651e-11],
        fmg: [2.4000000015898144, 4.800000012980577, 7.172807939374377e-11],
        v: 3.337468147061325e-08,
        v_q: 4.0412114012775555e-08,
        n: 2,
        sigma: 185.548400000675,
    },
    Pinned {
        inp: [56470.0, 92450.0, 7.04, 7.0, 5.0, 0.471, 1.734723475976807e-18, 2.0679515313825692e-25, 3.637978807091713e-12, 8.077935669463161e-28, 0.00048828125, 2.0, 2.0, 3.55, 2.21],
        c: 3.94,
        ir: [8.007472066178178e-16, 4.124269441889663e-16, 0.47100000000000075, 7.796350551776312e-16],
        ir_q: [8.00747316755228e-16, 4.1242705432637645e-16, 0.47100000000000075, 7.796352633768943e-16],
        quant: [92687.63417262676, 7.487247462012143e-23],
        fmg: [3.94, 7.88, 6.189969381302838e-24],
        v: 4.157332148621876e-06,
        v_q: 4.639069098333908e-06,
        n: 5,
        sigma: 204314.50000074328,
    },
    Pinned {
        inp: [5080.0, 5745.0, 5.9, 11.0, 7.0, 0.152, 5.820766091346741e-11, 1.2924697071141057e-26, 5.960464477539063e-08, 3.2311742677852644e-27, 0.03125, 1.0, 2.0, 2.28, 1.39],
        c: 3.42,
        ir: [5.409904476416427e-09, 4.1486997518533104e-09, 0.15200000540990447, 4.892334644245723e-09],
        ir_q: [5.409904476416448e-09, 4.148699751853332e-09, 0.15200000540990447, 4.892334644245749e-09],
        quant: [5816.274118724822, 1.879339526680906e-23],
        fmg: [3.42, 6.84, 7.418797580526225e-24],
        v: 0.01632119648964932,
        v_q: 0.018084697990294985,
        n: 2,
        sigma: 7985.5504759758705,
    },
    Pinned {
        inp: [5028.0, 6464.0, 5.34, 11.0, 6.0, 0.294, 7.105427357601002e-15, 1.0842021724855044e-19, 1.4901161193847656e-08, 2.6469779601696886e-23, 0.03125, 1.0, 2.0, 3.59, 1.45],
        c: 2.26,
        ir: [8.101740872556083e-13, 5.139194450066283e-13, 0.29400000000081017, 7.279312252226884e-13],
        ir_q: [8.101743110886031e-13, 5.139196688396231e-13, 0.29400000000081017, 7.279315422665903e-13],
        quant: [6534.908391604943, 1.7297758484306233e-19],
        fmg: [2.26, 4.52, 6.032686021774649e-20],
        v: 0.0029706237319819698,
        v_q: 0.0032916470817184254,
        n: 4,
        sigma: 9372.800139665604,
    },
    Pinned {
        inp: [18010.0, 52090.0, 1.09, 5.0, 6.0, 0.294, 1.1641532182693481e-10, 2.2737367544323206e-13, 1.52587890625e-05, 2.842170943040401e-14, 0.0009765625, 2.0, 2.0, 3.48, 2.79],
        c: 0.501,
        ir: [1.0163689590467799e-07, 9.245051746868901e-08, 0.2940001016368959, 1.3094976030880478e-07],
        ir_q: [1.035575815269399e-07, 9.437120309095093e-08, 0.2940001035575815, 1.3367027894266536e-07],
        quant: [52224.20141859221, 1.4843010779541205e-09],
        fmg: [0.5010027354900778, 1.0020027909732965, 1.22174855500867e-10],
        v: 4.235807408114926,
        v_q: 4.87680483033896,
        n: 4,
        sigma: 145333.31757659913,
    },
    Pinned {
        inp: [263000.0, 454100.0, 4.72, 9.0, 6.0, 0.319, 5.684341886080802e-14, 1.7763568394002505e-15, 5.820766091346741e-11, 5.421010862427522e-20, 0.25, 4.0, 2.0, 2.58, 2.42],
        c: 1.11,
        ir: [9.63423072923625e-09, 9.615632193918467e-09, 0.31900000963423075, 1.4119871262779096e-08],
        ir_q: [9.634263235478398e-09, 9.615664700160616e-09, 0.3190000096342632, 1.4119918995881986e-08],
        quant: [454612.83525620954, 2.4644611181228855e-14],
        fmg: [1.110000000333972, 2.2200000003359732, 8.915560425492186e-16],
        v: 0.0004002800859430498,
        v_q: 0.0005318283056780174,
        n: 4,
        sigma: 1098922.0000639656,
    },
    Pinned {
        inp: [65130.0, 66860.0, 3.24, 7.0, 7.0, 0.533, 8.881784197001252e-16, 2.842170943040401e-14, 7.62939453125e-06, 5.551115123125783e-17, 0.0625, 2.0, 2.0, 3.06, 3.43],
        c: 1.55,
        ir: [2.0470160682097284e-08, 2.0469919053707045e-08, 0.5330000204701607, 4.383280503420045e-08],
        ir_q: [2.047587209180304e-08, 2.04756304634128e-08, 0.5330000204758721, 4.3845035034642676e-08],
        quant: [67115.20579955625, 3.725642339056159e-12],
        fmg: [1.5500000184893765, 3.100000018927468, 4.5470897280509185e-13],
        v: 12.610814130257417,
        v_q: 14.805395689843289,
        n: 6,
        sigma: 229331.54964752198,
    },
    Pinned {
        inp: [1987.0, 4276.0, 3.62, 9.0, 4.0, 0.581, 1.1641532182693481e-10, 1.7763568394002505e-15, 3.725290298461914e-09, 4.440892098500626e-16, 0.0078125, 1.0, 2.0, 1.3, 2.46],
        c: 0.565,
        ir: [1.132848028913691e-08, 5.298509518743026e-09, 0.5810000113284802, 1.2645607785199388e-08],
        ir_q: [1.1331513787185904e-08, 5.3015430167920196e-09, 0.5810000113315138, 1.2652847637632306e-08],
        quant: [4320.575778184249, 1.9187210834311627e-12],
        fmg: [0.5650000007539707, 1.1300000008433877, 6.341589404825607e-13],
        v: 0.0006856393359208155,
        v_q: 0.0007549192740089651,
        n: 7,
        sigma: 10518.960039186179,
    },
    Pinned {
        inp: [11780000.0, 16140000.0, 4.92, 9.0, 5.0, 0.222, 1.1641532182693481e-10, 1.6940658945086007e-21, 1.9073486328125e-06, 8.673617379884035e-19, 0.25, 1.0, 2.0, 1.89, 2.67],
        c: 2.85,
        ir: [5.769662126700934e-07, 3.9956118158842024e-07, 0.22200057696621267, 5.135751644009483e-07],
        ir_q: [5.769833233597237e-07, 3.995782922780506e-07, 0.22200057698332337, 5.135971576028862e-07],
        quant: [16143432.200686341, 1.4002195410685263e-11],
        fmg: [2.850003252108005, 5.700003254989876, 9.57929703873483e-14],
        v: 23.81110364208384,
        v_q: 31.63312751004343,
        n: 3,
        sigma: 43093882.19490051,
    },
    Pinned {
        inp: [170.2, 304.0, 2.85, 9.0, 7.0, 0.371, 3.469446951953614e-18, 5.684341886080802e-14, 4.656612873077393e-10, 3.469446951953614e-18, 0.0078125, 2.0, 2.0, 2.2, 2.27],
        c: 4.54,
        ir: [2.2237332314321977e-10, 2.2237328955832942e-10, 0.37100000022237334, 3.5353464171215593e-10],
        ir_q: [2.2237483120829882e-10, 2.2237479762340847e-10, 0.37100000022237484, 3.5353703927190177e-10],
        quant: [317.0460722058407, 1.0999745288434194e-15],
        fmg: [4.540000000000137, 9.080000000000705, 1.4612482528686082e-15],
        v: 3.785585913871805e-05,
        v_q: 4.168395354200691e-05,
        n: 4,
        sigma: 690.0800003213435,
    },
    Pinned {
        inp: [135900.0, 195200.0, 4.13, 9.0, 7.0, 0.386, 3.552713678800501e-15, 8.673617379884035e-19, 2.3283064365386963e-10, 8.673617379884035e-19, 0.00048828125, 1.0, 2.0, 1.63, 2.73],
        c: 0.898,
        ir: [4.436727457489273e-12, 3.4256434599922646e-12, 0.38600000000443674, 5.579223876249215e-12],
        ir_q: [4.671832920013312e-12, 3.660748922516303e-12, 0.38600000000467183, 5.962131795674523e-12],
        quant: [195568.64617185644, 1.6962876083966054e-13],
        fmg: [0.8980000014179937, 1.796000001429253, 1.0249932643001704e-14],
        v: 0.0004665233677315395,
        v_q: 0.0005105562771769897,
        n: 4,
        sigma: 532896.0001240745,
    },
    Pinned {
        inp: [17990000.0, 26110000.0, 7.3, 9.0, 5.0, 0.416, 3.552713678800501e-15, 6.776263578034403e-21, 4.76837158203125e-07, 1.2924697071141057e-26, 0.25, 2.0, 2.0, 3.23, 3.79],
        c: 4.45,
        ir: [2.986099839416549e-11, 1.7323839903734715e-11, 0.416000000029861, 2.966410942572006e-11],
        ir_q: [2.9860998872091914e-11, 1.732384038166114e-11, 0.416000000029861, 2.966411024408722e-11],
        quant: [26114241.46201209, 3.37518660139138e-19],
        fmg: [4.450000000000108, 8.900000000000109, 1.7694742771291463e-21],
        v: 18.466610975759068,
        v_q: 24.558351922548702,
        n: 5,
        sigma: 98956947.18632698,
    },
    Pinned {
        inp: [23020000.0, 44790000.0, 5.94, 11.0, 4.0, 0.446, 5.551115123125783e-17, 6.462348535570529e-27, 1.862645149230957e-09, 1.3877787807814457e-17, 0.015625, 4.0, 2.0, 3.59, 1.17],
        c: 3.08,
        ir: [5.039158215252939e-13, 2.6634245703267074e-13, 0.44600000000050394, 4.807625578211426e-13],
        ir_q: [8.994137205642346e-10, 8.99176147199742e-10, 0.4460000008994137, 1.6230616401796858e-09],
        quant: [44794797.94405818, 6.216527007615627e-10],
        fmg: [3.0802374066733105, 6.16023754473938, 2.143520425798277e-12],
        v: 0.06266119765016159,
        v_q: 0.0685026511826148,
        n: 5,
        sigma: 64766340.12063671,
    },
    Pinned {
        inp: [943100.0, 1106000.0, 7.44, 9.0, 5.0, 0.032, 1.8189894035458565e-12, 3.469446951953614e-18, 1.8189894035458565e-12, 1.6155871338926322e-27, 0.001953125, 2.0, 2.0, 2.76, 3.82],
        c: 0.867,
        ir: [1.915207379376419e-09, 1.8021525767095501e-09, 0.03200000191520738, 1.8617278721850672e-09],
        ir_q: [1.9152073793782645e-09, 1.8021525767113958e-09, 0.03200000191520738, 1.8617278721869739e-09],
        quant: [1106971.1333585044, 1.788408320644545e-21],
        fmg: [0.8670000000000001, 1.734, 5.029143540582757e-23],
        v: 1.7016801233462144e-05,
        v_q: 1.8652156041408636e-05,
        n: 2,
        sigma: 4224920.000007685,
    },
    Pinned {
        inp: [80.14, 89.71, 4.38, 9.0, 4.0, 0.0684, 1.7763568394002505e-15, 6.617444900424222e-24, 3.725290298461914e-09, 2.6469779601696886e-23, 0.0625, 2.0, 2.0, 3.52, 2.39],
        c: 4.06,
        ir: [1.8077530263383197e-14, 1.5902120973086894e-14, 0.06840000000001809, 1.7069687605288968e-14],
        ir_q: [1.8077533053578072e-14, 1.5902123763281765e-14, 0.06840000000001809, 1.7069690600345722e-14],
        quant: [98.66209472693401, 2.611563902463684e-21],
        fmg: [4.06, 8.12, 7.642847774157457e-21],
        v: 0.00013168470713613157,
        v_q: 0.00015176002932322852,
        n: 2,
        sigma: 214.40690079872795,
    },
    Pinned {
        inp: [28750.0, 60620.0, 7.69, 5.0, 7.0, 0.382, 9.094947017729282e-13, 5.169878828456423e-26, 5.820766091346741e-11, 8.881784197001252e-16, 0.000244140625, 4.0, 2.0, 3.98, 1.5],
        c: 2.14,
        ir: [2.720305495366363e-10, 1.5421232967870045e-10, 0.38200000027203057, 2.495345141530444e-10],
        ir_q: [3.466474573126948e-10, 2.2882923745475895e-10, 0.38200000034664744, 3.7027384722186644e-10],
        quant: [60789.55825285112, 5.3991973783286016e-11],
        fmg: [2.1400001427123345, 4.280000151358854, 4.8392778001461285e-12],
        v: 8.224877462248871e-05,
        v_q: 9.453639490333814e-05,
        n: 4,
        sigma: 90930.00000529282,
    },
    Pinned {
        inp: [368.7, 690.1, 3.67, 7.0, 7.0, 0.214, 7.275957614183426e-12, 4.336808689942018e-19, 1.862645149230957e-09, 8.077935669463161e-28, 0.001953125, 2.0, 2.0, 3.67, 2.62],
        c: 3.67,
        ir: [1.9950814340458821e-10, 1.397123685072396e-10, 0.21400000019950813, 1.7775110501616083e-10],
        ir_q: [1.995081434045889e-10, 1.397123685072403e-10, 0.21400000019950813, 1.777511050161617e-10],
        quant: [709.3015624364269, 5.729692391611164e-25],
        fmg: [3.67, 7.34, 4.999065679358419e-25],
        v: 0.00019456109245947548,
        v_q: 0.0002174183948471709,
        n: 3,
        sigma: 1808.062003367778,
    },
];
